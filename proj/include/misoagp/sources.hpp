#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "misoagp/spaces.hpp"

namespace misoagp {

class ChildProcess;

enum class SourceKind { analytic, external };

struct Evaluation {
    double y = 0.0;
    /// Wall-clock seconds for external sources, 0 for analytic ones.
    double actual_cost = 0.0;
};

/// A queryable approximation f_s of the objective with nominal cost c_s.
class InformationSource {
public:
    virtual ~InformationSource() = default;
    /// x in raw units. Throws SourceEvaluationError on failure or non-finite y.
    virtual Evaluation evaluate(const RawPoint& x) = 0;
    virtual SourceKind kind() const noexcept = 0;
    double cost() const noexcept { return cost_; }

protected:
    explicit InformationSource(double cost) : cost_(cost) {}

private:
    double cost_;
};

using Objective = std::function<double(const RawPoint&)>;

/// Closed-form source with optional Gaussian observation noise. The noise
/// draw is a deterministic function of (seed, x), so repeated queries at the
/// same x reproduce the same observation.
class AnalyticSource final : public InformationSource {
public:
    AnalyticSource(Objective f, double cost, double noise_std = 0.0, std::uint64_t noise_seed = 0);
    Evaluation evaluate(const RawPoint& x) override;
    SourceKind kind() const noexcept override { return SourceKind::analytic; }

private:
    Objective f_;
    double noise_std_;
    std::uint64_t noise_seed_;
};

/// Line-delimited JSON messages exchanged with an external evaluator.
namespace protocol {

struct SourceInfo {
    int id = 0;
    double cost = 0.0;
};

struct Hello {
    std::string name;
    std::vector<SourceInfo> sources;
    std::size_t dims = 0;
};

std::string hello_request();
/// {"op":"eval","x":[...],"source":s} with s 1-based.
std::string eval_request(const RawPoint& x, int source);
/// Throws SourceEvaluationError on malformed or error replies.
Hello parse_hello(const std::string& line);
Evaluation parse_eval_reply(const std::string& line);

std::string hello_reply(const Hello& hello);
std::string eval_reply(double y, double cost_seconds);
std::string error_reply(const std::string& message);

struct Request {
    std::string op;
    RawPoint x;
    int source = 0;
};
/// Server-side parse. Throws SourceEvaluationError on malformed input.
Request parse_request(const std::string& line);

}  // namespace protocol

/// One evaluator process shared by all of an experiment's external sources.
class ExternalEvaluator {
public:
    ExternalEvaluator(const std::vector<std::string>& command, std::chrono::milliseconds timeout);
    ~ExternalEvaluator();

    const protocol::Hello& hello() const noexcept { return hello_; }
    /// Sends one eval request; cost_seconds is the evaluator-reported value
    /// or, when absent, the measured round-trip time.
    Evaluation evaluate(const RawPoint& x, int source);

private:
    std::unique_ptr<ChildProcess> child_;
    std::chrono::milliseconds timeout_;
    protocol::Hello hello_;
};

class ExternalSource final : public InformationSource {
public:
    ExternalSource(std::shared_ptr<ExternalEvaluator> evaluator, int source_id, double cost);
    Evaluation evaluate(const RawPoint& x) override;
    SourceKind kind() const noexcept override { return SourceKind::external; }

private:
    std::shared_ptr<ExternalEvaluator> evaluator_;
    int source_id_;
};

using SourceList = std::vector<std::unique_ptr<InformationSource>>;

struct Benchmark {
    std::string name;
    SearchSpace space;
    SourceList sources;
    RawPoint optimum;
    double optimum_value = 0.0;
};

/// Named numeric overrides, e.g. {"a": 0.05, "cost1": 10}.
using BenchmarkParams = std::map<std::string, double>;

/// Built-in multi-source problems:
///  biased-quadratic-2src  f1 = |x - x*|^2, f2 = f1 + a sin(b x_1)   (params d, a, b, center, cost1, cost2, noise)
///  forrester-2src         f1 = (6x-2)^2 sin(12x-4), f2 = A f1 + B(x-0.5) + C   (params A, B, C, cost1, cost2, noise)
///  region-biased-2src     f2 = f1 + bias (1 - exp(-|x-x*|^2 / (2 w^2)))        (params d, bias, width, center, cost1, cost2, noise)
/// Throws InvalidArgument for unknown names or parameters.
Benchmark make_benchmark(const std::string& name, const BenchmarkParams& params = {}, std::uint64_t noise_seed = 0);

std::vector<std::string> benchmark_names();
std::string benchmark_description(const std::string& name);

}  // namespace misoagp
