#include "misoagp/sources.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <random>
#include <set>

#include <json.hpp>

#include "misoagp/errors.hpp"
#include "misoagp/process.hpp"
#include "misoagp/random.hpp"

namespace misoagp {

using ojson = nlohmann::ordered_json;

AnalyticSource::AnalyticSource(Objective f, double cost, double noise_std, std::uint64_t noise_seed)
    : InformationSource(cost), f_(std::move(f)), noise_std_(noise_std), noise_seed_(noise_seed) {
    if (!(cost > 0.0)) throw InvalidArgument("source cost must be positive");
    if (!(noise_std >= 0.0)) throw InvalidArgument("noise_std must be >= 0");
}

Evaluation AnalyticSource::evaluate(const RawPoint& x) {
    double y = f_(x);
    if (noise_std_ > 0.0) {
        std::uint64_t h = noise_seed_;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            std::uint64_t bits;
            const double v = x[i];
            std::memcpy(&bits, &v, sizeof bits);
            h = derive_seed(h, {bits});
        }
        std::mt19937_64 rng(h);
        y += std::normal_distribution<double>(0.0, noise_std_)(rng);
    }
    if (!std::isfinite(y)) throw SourceEvaluationError("analytic source returned a non-finite value");
    return {y, 0.0};
}

namespace protocol {

namespace {

ojson parse_object(const std::string& line) {
    ojson j;
    try {
        j = ojson::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw SourceEvaluationError(std::string("malformed evaluator message: ") + e.what(), line);
    }
    if (!j.is_object()) throw SourceEvaluationError("evaluator message is not a JSON object", line);
    return j;
}

void throw_if_error(const ojson& j, const std::string& line) {
    if (j.contains("error"))
        throw SourceEvaluationError("evaluator reported: " +
                                        (j["error"].is_string() ? j["error"].get<std::string>() : j["error"].dump()),
                                    line);
}

double number_field(const ojson& j, const char* key, const std::string& line) {
    if (!j.contains(key) || !j[key].is_number())
        throw SourceEvaluationError(std::string("evaluator reply lacks numeric '") + key + "'", line);
    return j[key].get<double>();
}

}  // namespace

std::string hello_request() { return ojson{{"op", "hello"}}.dump(); }

std::string eval_request(const RawPoint& x, int source) {
    ojson j;
    j["op"] = "eval";
    j["x"] = std::vector<double>(x.data(), x.data() + x.size());
    j["source"] = source;
    return j.dump();
}

Hello parse_hello(const std::string& line) {
    const auto j = parse_object(line);
    throw_if_error(j, line);
    Hello h;
    try {
        h.name = j.at("name").get<std::string>();
        h.dims = j.at("dims").get<std::size_t>();
        for (const auto& s : j.at("sources")) h.sources.push_back({s.at("id").get<int>(), s.at("cost").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw SourceEvaluationError(std::string("malformed hello reply: ") + e.what(), line);
    }
    return h;
}

Evaluation parse_eval_reply(const std::string& line) {
    const auto j = parse_object(line);
    throw_if_error(j, line);
    Evaluation e;
    e.y = number_field(j, "y", line);
    e.actual_cost = j.contains("cost_seconds") ? number_field(j, "cost_seconds", line) : -1.0;
    if (!std::isfinite(e.y)) throw SourceEvaluationError("evaluator returned a non-finite y", line);
    return e;
}

std::string hello_reply(const Hello& hello) {
    ojson j;
    j["name"] = hello.name;
    j["sources"] = ojson::array();
    for (const auto& s : hello.sources) j["sources"].push_back(ojson{{"id", s.id}, {"cost", s.cost}});
    j["dims"] = hello.dims;
    return j.dump();
}

std::string eval_reply(double y, double cost_seconds) {
    ojson j;
    j["y"] = y;
    j["cost_seconds"] = cost_seconds;
    return j.dump();
}

std::string error_reply(const std::string& message) { return ojson{{"error", message}}.dump(); }

Request parse_request(const std::string& line) {
    const auto j = parse_object(line);
    Request r;
    try {
        r.op = j.at("op").get<std::string>();
        if (r.op == "eval") {
            const auto xs = j.at("x").get<std::vector<double>>();
            r.x = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
            r.source = j.at("source").get<int>();
        } else if (r.op != "hello") {
            throw SourceEvaluationError("unknown op '" + r.op + "'", line);
        }
    } catch (const nlohmann::json::exception& e) {
        throw SourceEvaluationError(std::string("malformed request: ") + e.what(), line);
    }
    return r;
}

}  // namespace protocol

ExternalEvaluator::ExternalEvaluator(const std::vector<std::string>& command, std::chrono::milliseconds timeout)
    : child_(std::make_unique<ChildProcess>(command)), timeout_(timeout) {
    hello_ = protocol::parse_hello(child_->request(protocol::hello_request(), timeout_));
}

ExternalEvaluator::~ExternalEvaluator() = default;

Evaluation ExternalEvaluator::evaluate(const RawPoint& x, int source) {
    const auto start = std::chrono::steady_clock::now();
    const std::string reply = child_->request(protocol::eval_request(x, source), timeout_);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto e = protocol::parse_eval_reply(reply);
    if (e.actual_cost < 0.0) e.actual_cost = elapsed;
    return e;
}

ExternalSource::ExternalSource(std::shared_ptr<ExternalEvaluator> evaluator, int source_id, double cost)
    : InformationSource(cost), evaluator_(std::move(evaluator)), source_id_(source_id) {
    if (!(cost > 0.0)) throw InvalidArgument("source cost must be positive");
}

Evaluation ExternalSource::evaluate(const RawPoint& x) { return evaluator_->evaluate(x, source_id_); }

namespace {

double param(const BenchmarkParams& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

void check_keys(const std::string& name, const BenchmarkParams& p, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : p) {
        if (!allowed.count(k)) throw InvalidArgument("benchmark '" + name + "': unknown parameter '" + k + "'");
        if (!std::isfinite(v)) throw InvalidArgument("benchmark '" + name + "': parameter '" + k + "' not finite");
    }
}

std::size_t dimension_param(const BenchmarkParams& p, double fallback) {
    const double d = param(p, "d", fallback);
    if (d < 1 || d != std::floor(d)) throw InvalidArgument("benchmark parameter d must be a positive integer");
    return static_cast<std::size_t>(d);
}

}  // namespace

std::vector<std::string> benchmark_names() {
    return {"biased-quadratic-2src", "forrester-2src", "region-biased-2src"};
}

std::string benchmark_description(const std::string& name) {
    if (name == "biased-quadratic-2src") return "f1 = |x - c|^2 on [0,1]^d, f2 = f1 + a sin(b x_1)";
    if (name == "forrester-2src") return "f1 = (6x-2)^2 sin(12x-4) on [0,1], f2 = A f1 + B (x-0.5) + C";
    if (name == "region-biased-2src") return "f1 = |x - c|^2 on [0,1]^d, f2 accurate near c and biased elsewhere";
    throw InvalidArgument("unknown benchmark '" + name + "'");
}

Benchmark make_benchmark(const std::string& name, const BenchmarkParams& params, std::uint64_t noise_seed) {
    const std::set<std::string> common = {"cost1", "cost2", "noise"};
    const double noise = param(params, "noise", 0.0);
    const std::uint64_t seed1 = derive_seed(noise_seed, {1});
    const std::uint64_t seed2 = derive_seed(noise_seed, {2});
    Benchmark b;
    b.name = name;

    if (name == "biased-quadratic-2src" || name == "region-biased-2src") {
        const bool quad = name == "biased-quadratic-2src";
        auto allowed = common;
        const std::vector<std::string> extra = quad ? std::vector<std::string>{"d", "a", "b", "center"}
                                                    : std::vector<std::string>{"d", "bias", "width", "center"};
        allowed.insert(extra.begin(), extra.end());
        check_keys(name, params, allowed);
        const std::size_t d = dimension_param(params, quad ? 2 : 1);
        const double center = param(params, "center", quad ? 0.6 : 0.7);
        const Eigen::VectorXd c = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), center);
        const Objective f1 = [c](const RawPoint& x) { return (x - c).squaredNorm(); };
        Objective f2;
        if (quad) {
            const double a = param(params, "a", 0.05);
            const double bb = param(params, "b", 10.0);
            f2 = [f1, a, bb](const RawPoint& x) { return f1(x) + a * std::sin(bb * x[0]); };
        } else {
            const double bias = param(params, "bias", 0.5);
            const double width = param(params, "width", 0.1);
            if (!(width > 0.0)) throw InvalidArgument("region-biased-2src: width must be positive");
            f2 = [f1, c, bias, width](const RawPoint& x) {
                return f1(x) + bias * (1.0 - std::exp(-(x - c).squaredNorm() / (2.0 * width * width)));
            };
        }
        b.space = SearchSpace::unit_cube(d);
        b.sources.push_back(std::make_unique<AnalyticSource>(f1, param(params, "cost1", 10.0), noise, seed1));
        b.sources.push_back(std::make_unique<AnalyticSource>(f2, param(params, "cost2", 1.0), noise, seed2));
        b.optimum = c;
        b.optimum_value = 0.0;
        return b;
    }
    if (name == "forrester-2src") {
        auto allowed = common;
        allowed.insert({"A", "B", "C"});
        check_keys(name, params, allowed);
        const double A = param(params, "A", 0.5), B = param(params, "B", 10.0), C = param(params, "C", -5.0);
        const Objective f1 = [](const RawPoint& x) {
            const double t = 6.0 * x[0] - 2.0;
            return t * t * std::sin(12.0 * x[0] - 4.0);
        };
        const Objective f2 = [f1, A, B, C](const RawPoint& x) { return A * f1(x) + B * (x[0] - 0.5) + C; };
        b.space = SearchSpace::unit_cube(1);
        b.sources.push_back(std::make_unique<AnalyticSource>(f1, param(params, "cost1", 10.0), noise, seed1));
        b.sources.push_back(std::make_unique<AnalyticSource>(f2, param(params, "cost2", 1.0), noise, seed2));
        b.optimum = Eigen::VectorXd::Constant(1, 0.757249);
        b.optimum_value = -6.020740055735769;
        return b;
    }
    throw InvalidArgument("unknown benchmark '" + name + "'");
}

}  // namespace misoagp
