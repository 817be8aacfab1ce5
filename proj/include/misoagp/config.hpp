#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "misoagp/acquisition.hpp"
#include "misoagp/gp.hpp"
#include "misoagp/misoloop.hpp"
#include "misoagp/sources.hpp"
#include "misoagp/spaces.hpp"

namespace misoagp {

enum class Method { miso_agp, vanilla_bo, both };

std::string_view to_string(Method method);

struct BenchmarkSpec {
    std::string name;
    BenchmarkParams params;
};

struct ExternalSpec {
    std::vector<std::string> command;
    /// Nominal costs, source 1 first.
    std::vector<double> costs;
    double timeout_seconds = 600.0;
};

/// Every knob of an experiment. Loaded from a JSON object whose keys mirror
/// these fields; unknown keys are rejected.
struct ExperimentConfig {
    std::optional<SearchSpace> space;
    std::optional<BenchmarkSpec> benchmark;
    std::optional<ExternalSpec> external;
    Method method = Method::both;
    std::size_t n_init = 3;
    std::vector<std::size_t> n_init_per_source;
    std::size_t max_iterations = 30;
    double max_cost = std::numeric_limits<double>::infinity();
    double m = 1.0;
    double delta = 1e-4;
    bool shift_numerator = false;
    KernelFamily kernel = KernelFamily::se;
    NoiseConfig noise;
    std::size_t mle_restarts = 10;
    BetaSchedule beta;
    InnerOptimizerConfig inner;
    LhsMode lhs = LhsMode::jittered;
    std::size_t n_runs = 10;
    std::uint64_t base_seed = 0;
    std::string output_dir = "results";

    /// Loop settings for one run with the given seed.
    LoopConfig loop_config(const SearchSpace& resolved_space, std::uint64_t seed) const;
};

/// Parses and validates; throws ConfigError listing every violation found.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Semantic checks (ranges, cost order, command presence). Returns the
/// violations; empty means valid.
std::vector<std::string> validate_config(const ExperimentConfig& config);

/// Canonical JSON rendering, used in run metadata.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace misoagp
