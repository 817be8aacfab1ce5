// misoagp: run, validate and summarize multi-source Bayesian optimization experiments.
//
//   misoagp run <config.json> [--seed N] [--out DIR] [--resume]
//   misoagp validate <config.json>
//   misoagp summarize <dir> [--target Y]
//   misoagp bench list
//
// Exit codes: 0 ok, 2 validation error, 3 runtime failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "misoagp/misoagp.hpp"

namespace {

int cmd_validate(const std::string& path) {
    try {
        const auto cfg = misoagp::load_config(path);
        std::cout << "ok: " << path << " (" << misoagp::to_string(cfg.method) << ", " << cfg.n_runs << " runs)\n";
        return misoagp::exit_code::ok;
    } catch (const misoagp::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return misoagp::exit_code::validation;
    }
}

int cmd_run(const std::string& path, const misoagp::RunOptions& opts) {
    misoagp::ExperimentConfig cfg;
    try {
        cfg = misoagp::load_config(path);
    } catch (const misoagp::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return misoagp::exit_code::validation;
    }
    const auto result = misoagp::run_experiment(cfg, opts, std::cerr);
    if (result.status == misoagp::exit_code::ok) std::cout << "summary: " << result.summary.string() << "\n";
    return result.status;
}

int cmd_summarize(const std::string& dir, std::optional<double> target) {
    try {
        const auto summary = misoagp::summarize(misoagp::load_traces(dir), target);
        misoagp::write_summary(summary, dir);
        std::cout << "method,runs,final_best_seen_mean,final_augmented_best_seen_mean,cheap_source_share,"
                     "median_nominal_cost_to_target,cost_to_match_ratio\n";
        for (const auto& m : summary.methods)
            std::cout << m.method << ',' << m.runs << ',' << misoagp::format_double(m.final_best_seen_mean) << ','
                      << misoagp::format_double(m.final_augmented_best_seen_mean) << ','
                      << misoagp::format_double(m.cheap_source_share) << ','
                      << misoagp::format_double(m.median_nominal_cost_to_target) << ','
                      << misoagp::format_double(m.cost_to_match_ratio) << '\n';
        return misoagp::exit_code::ok;
    } catch (const misoagp::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return misoagp::exit_code::validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return misoagp::exit_code::runtime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-information-source Bayesian optimization with augmented Gaussian processes"};
    app.require_subcommand(1);

    std::string config_path;
    misoagp::RunOptions run_opts;
    std::uint64_t seed = 0;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "run an experiment");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    auto* seed_opt = run->add_option("--seed", seed, "override base_seed");
    auto* out_opt = run->add_option("--out", out_dir, "override output_dir");
    run->add_flag("--resume", run_opts.resume, "continue interrupted runs, skip completed ones");

    auto* validate = app.add_subcommand("validate", "validate a config without running it");
    validate->add_option("config", config_path, "experiment config (JSON)")->required();

    std::string summary_dir;
    double target = 0.0;
    auto* summarize = app.add_subcommand("summarize", "aggregate trace files into summary.csv and curves.csv");
    summarize->add_option("dir", summary_dir, "directory holding trace_*.csv")->required();
    auto* target_opt = summarize->add_option("--target", target, "objective level for cost-to-target");

    auto* bench = app.add_subcommand("bench", "built-in benchmark problems");
    bench->require_subcommand(1);
    auto* bench_list = bench->add_subcommand("list", "list built-in benchmarks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : misoagp::exit_code::validation;
    }

    if (*run) {
        if (*seed_opt) run_opts.seed = seed;
        if (*out_opt) run_opts.output_dir = out_dir;
        return cmd_run(config_path, run_opts);
    }
    if (*validate) return cmd_validate(config_path);
    if (*summarize)
        return cmd_summarize(summary_dir, *target_opt ? std::optional<double>(target) : std::nullopt);
    if (*bench_list) {
        for (const auto& name : misoagp::benchmark_names())
            std::cout << name << "\t" << misoagp::benchmark_description(name) << "\n";
        return misoagp::exit_code::ok;
    }
    return misoagp::exit_code::validation;
}
