#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "misoagp/acquisition.hpp"
#include "misoagp/agp.hpp"
#include "misoagp/errors.hpp"
#include "misoagp/gp.hpp"
#include "misoagp/sources.hpp"
#include "misoagp/spaces.hpp"

namespace misoagp {

struct EvaluationRecord {
    std::size_t source = 0;  // 0-based
    UnitPoint x;
    RawPoint raw;
    double y = 0.0;
    double nominal_cost = 0.0;
    double actual_cost = 0.0;
    std::size_t iteration = 0;  // 0 for the initial design
};

/// One line of the run trace; one per source query.
struct TraceRow {
    std::size_t iteration = 0;
    std::size_t source = 1;  // 1-based, as written to disk
    RawPoint x;
    double y = 0.0;
    double nominal_cost_cum = 0.0;
    double actual_cost_cum = 0.0;
    double best_seen = 0.0;
    double augmented_best_seen = 0.0;
    std::size_t dhat_size = 0;
    bool corrected = false;
};

struct Incumbent {
    RawPoint x;
    double y = std::numeric_limits<double>::quiet_NaN();
    std::size_t source = 1;  // 1-based
};

struct RunTrace {
    std::vector<TraceRow> rows;
    std::vector<EvaluationRecord> records;
    /// Minimum over the final augmented set.
    Incumbent augmented;
    /// Minimum over source-1 evaluations only.
    Incumbent conservative;
    std::size_t loop_iterations = 0;
};

/// Receives rows as soon as they are final, for crash-safe persistence.
class TraceObserver {
public:
    virtual ~TraceObserver() = default;
    virtual void on_row(const TraceRow& row) = 0;
};

struct LoopConfig {
    SearchSpace space;
    std::size_t n_init = 3;
    /// Optional per-source initial counts; empty means a shared n_init design.
    std::vector<std::size_t> n_init_per_source;
    LhsMode lhs = LhsMode::jittered;
    std::size_t max_iterations = 30;
    double max_cost = std::numeric_limits<double>::infinity();
    MleConfig mle;
    MisoAcquisitionConfig acquisition;
    BetaSchedule beta;  // dim is taken from the space
    std::uint64_t seed = 0;
};

/// Raised when a source fails mid-run. The partial trace covers every row
/// already handed to the observer; `resume_iteration` is the last completed
/// loop iteration.
class RunInterrupted : public Error {
public:
    RunInterrupted(const std::string& what, RunTrace partial, std::size_t resume_iteration)
        : Error(what), partial_(std::move(partial)), resume_iteration_(resume_iteration) {}
    const RunTrace& partial() const noexcept { return partial_; }
    std::size_t resume_iteration() const noexcept { return resume_iteration_; }

private:
    RunTrace partial_;
    std::size_t resume_iteration_;
};

/// Evaluates the initial design. With a shared design every source is
/// queried at the same Latin-hypercube points; records are source-major.
/// Throws SourceEvaluationError naming the failing source.
std::vector<EvaluationRecord> initialize(const SearchSpace& space, SourceList& sources, const LoopConfig& config,
                                         std::size_t sources_to_use);

/// Running minimum of a sequence.
std::vector<double> best_seen(std::span<const double> values);
/// Minimum of source-1 y values. Throws UndefinedIncumbent when none exist.
double best_seen_value(const std::vector<EvaluationRecord>& records);
/// Minimum y over D-hat. Throws UndefinedIncumbent when empty.
double augmented_best_seen(const AugmentedDataset& dhat);

/// The multi-source loop. `resume_rows` (possibly empty) are rows of an
/// interrupted run of the same configuration; they are not re-emitted.
RunTrace run_miso_agp(const LoopConfig& config, SourceList& sources, TraceObserver* observer = nullptr,
                      const std::vector<TraceRow>& resume_rows = {});

/// GP-LCB on source 1 only, sharing the initial design of run_miso_agp.
RunTrace run_vanilla_bo(const LoopConfig& config, SourceList& sources, TraceObserver* observer = nullptr,
                        const std::vector<TraceRow>& resume_rows = {});

}  // namespace misoagp
