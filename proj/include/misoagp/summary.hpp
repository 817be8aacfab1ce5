#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "misoagp/trace.hpp"

namespace misoagp {

struct LabeledTrace {
    std::string method;
    std::size_t run = 0;
    TraceFile trace;
};

enum class CostAxis { nominal, actual };

/// Mean and population standard deviation across runs at one cost value.
struct CurvePoint {
    double cost = 0.0;
    double best_seen_mean = 0.0;
    double best_seen_std = 0.0;
    double augmented_best_seen_mean = 0.0;
    double augmented_best_seen_std = 0.0;
    std::size_t runs = 0;  // runs with at least one row at or below this cost
};

struct MethodSummary {
    std::string method;
    std::size_t runs = 0;
    double final_best_seen_mean = 0.0;
    double final_best_seen_std = 0.0;
    double final_augmented_best_seen_mean = 0.0;
    double final_augmented_best_seen_std = 0.0;
    double nominal_cost_mean = 0.0;
    double actual_cost_mean = 0.0;
    /// Fraction of loop queries sent to sources other than source 1.
    double cheap_source_share = 0.0;
    /// Median cumulated cost at which augmented_best_seen first reaches the
    /// target; +inf when fewer than half the runs reach it.
    double median_nominal_cost_to_target = std::numeric_limits<double>::infinity();
    double median_actual_cost_to_target = std::numeric_limits<double>::infinity();
    /// median_nominal_cost_to_target relative to the vanilla method.
    double cost_to_match_ratio = std::numeric_limits<double>::quiet_NaN();
    std::map<CostAxis, std::vector<CurvePoint>> curves;
};

struct Summary {
    double target = std::numeric_limits<double>::quiet_NaN();
    std::vector<MethodSummary> methods;
};

/// First cumulated cost at which `augmented_best_seen` (or best_seen) is <= target.
std::optional<double> cost_to_reach(const TraceFile& trace, double target, CostAxis axis,
                                    bool use_augmented = true);

/// Median with +inf standing for runs that never got there.
double median(std::vector<double> values);

/// Curves resampled on `grid_points` equally spaced costs from 0 to the
/// largest final cost. Without an explicit target the cost-to-match target
/// is the vanilla method's mean final best_seen (or, without vanilla runs,
/// the mean final augmented_best_seen of the first method).
Summary summarize(const std::vector<LabeledTrace>& traces, std::optional<double> target = std::nullopt,
                  std::size_t grid_points = 101);

/// Loads every trace_<method>_run<r>.csv under dir. Throws SchemaError if
/// none are present or their column sets disagree.
std::vector<LabeledTrace> load_traces(const std::filesystem::path& dir);

/// Writes summary.csv and curves.csv into dir.
void write_summary(const Summary& summary, const std::filesystem::path& dir);

}  // namespace misoagp
