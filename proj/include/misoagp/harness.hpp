#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "misoagp/config.hpp"

namespace misoagp {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation = 2;
inline constexpr int runtime = 3;
}  // namespace exit_code

struct RunOptions {
    std::optional<std::uint64_t> seed;  // replaces base_seed
    std::optional<std::filesystem::path> output_dir;
    /// Skip completed (method, run) pairs and continue interrupted ones.
    bool resume = false;
};

struct ExperimentResult {
    int status = exit_code::ok;
    std::vector<std::filesystem::path> traces;
    std::filesystem::path summary;
    std::string message;
};

std::string trace_file_name(Method method, std::size_t run);

/// Runs every configured (method, run) pair with seed base_seed + run and a
/// shared initial design per run, writes one trace CSV (+ .meta.json) per
/// pair and then summary.csv / curves.csv. Never throws for run failures:
/// they are reported through the returned status and message.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);

}  // namespace misoagp
