#include "misoagp/harness.hpp"

#include <chrono>
#include <fstream>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "misoagp/errors.hpp"
#include "misoagp/summary.hpp"
#include "misoagp/trace.hpp"

namespace misoagp {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct ResolvedProblem {
    SearchSpace space;
    SourceList sources;
};

/// Fresh source objects for one run. External sources share one evaluator.
ResolvedProblem resolve(const ExperimentConfig& cfg, std::uint64_t seed,
                        std::shared_ptr<ExternalEvaluator>& evaluator) {
    ResolvedProblem p;
    if (cfg.benchmark) {
        auto b = make_benchmark(cfg.benchmark->name, cfg.benchmark->params, seed);
        p.space = cfg.space ? *cfg.space : b.space;
        p.sources = std::move(b.sources);
        return p;
    }
    const auto& ext = *cfg.external;
    if (!evaluator) {
        evaluator = std::make_shared<ExternalEvaluator>(
            ext.command, std::chrono::milliseconds(static_cast<long long>(ext.timeout_seconds * 1000.0)));
        if (evaluator->hello().dims != cfg.space->dim())
            throw SourceEvaluationError("evaluator reports " + std::to_string(evaluator->hello().dims) +
                                        " dimensions, config space has " + std::to_string(cfg.space->dim()));
        if (evaluator->hello().sources.size() < ext.costs.size())
            throw SourceEvaluationError("evaluator advertises fewer sources than configured costs");
    }
    p.space = *cfg.space;
    for (std::size_t s = 0; s < ext.costs.size(); ++s)
        p.sources.push_back(std::make_unique<ExternalSource>(evaluator, static_cast<int>(s + 1), ext.costs[s]));
    return p;
}

ojson incumbent_json(const Incumbent& inc) {
    ojson j;
    j["x"] = std::vector<double>(inc.x.data(), inc.x.data() + inc.x.size());
    j["y"] = inc.y;
    j["source"] = inc.source;
    return j;
}

void write_meta(const fs::path& path, Method method, std::size_t run, std::uint64_t seed, const SearchSpace& space,
                const std::string& status, const RunTrace* trace, const std::string& resume_token, const std::string& error = "") {
    ojson j;
    j["method"] = std::string(to_string(method));
    j["run"] = run;
    j["seed"] = seed;
    j["dimensions"] = ojson::array();
    for (const auto& d : space.dims())
        j["dimensions"].push_back({{"name", d.name}, {"lower", d.lower}, {"upper", d.upper}, {"log10", d.log10_scaled}});
    j["status"] = status;
    if (trace) {
        j["loop_iterations"] = trace->loop_iterations;
        if (trace->augmented.x.size()) j["incumbent"] = incumbent_json(trace->augmented);
        if (trace->conservative.x.size()) j["source1_incumbent"] = incumbent_json(trace->conservative);
    }
    if (!resume_token.empty()) j["resume_token"] = resume_token;
    if (!error.empty()) j["error"] = error;
    std::ofstream out(path, std::ios::trunc);
    out << j.dump(2) << '\n';
}

std::string read_status(const fs::path& meta) {
    std::ifstream in(meta);
    if (!in) return {};
    try {
        return ojson::parse(in).value("status", "");
    } catch (const nlohmann::json::exception&) {
        return {};
    }
}

}  // namespace

std::string trace_file_name(Method method, std::size_t run) {
    return "trace_" + std::string(to_string(method)) + "_run" + std::to_string(run) + ".csv";
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options, std::ostream& log) {
    ExperimentResult result;
    const fs::path out_dir = options.output_dir ? *options.output_dir : fs::path(config.output_dir);
    const std::uint64_t base_seed = options.seed.value_or(config.base_seed);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        result.status = exit_code::runtime;
        result.message = "cannot create output directory " + out_dir.string() + ": " + ec.message();
        return result;
    }
    {
        std::ofstream cfg_out(out_dir / "config.json", std::ios::trunc);
        cfg_out << config_to_json(config) << '\n';
    }

    std::vector<Method> methods;
    if (config.method == Method::miso_agp || config.method == Method::both) methods.push_back(Method::miso_agp);
    if (config.method == Method::vanilla_bo || config.method == Method::both) methods.push_back(Method::vanilla_bo);

    std::shared_ptr<ExternalEvaluator> evaluator;
    for (std::size_t run = 1; run <= config.n_runs && result.status == exit_code::ok; ++run) {
        const std::uint64_t seed = base_seed + run;
        for (Method method : methods) {
            const fs::path trace_path = out_dir / trace_file_name(method, run);
            fs::path meta_path = trace_path;
            meta_path.replace_extension(".meta.json");
            result.traces.push_back(trace_path);

            if (options.resume && read_status(meta_path) == "complete" && fs::exists(trace_path)) {
                log << "skip " << trace_path.filename().string() << " (complete)\n";
                continue;
            }
            std::vector<TraceRow> resume_rows;
            if (options.resume && fs::exists(trace_path)) {
                try {
                    resume_rows = read_trace_csv(trace_path).rows;
                } catch (const SchemaError&) {
                    resume_rows.clear();
                }
            }

            std::optional<SearchSpace> space;
            try {
                auto problem = resolve(config, seed, evaluator);
                space = problem.space;
                const auto loop = config.loop_config(problem.space, seed);
                auto attempt = [&](const std::vector<TraceRow>& rows) {
                    CsvTraceWriter writer(trace_path, problem.space.dim(), !rows.empty());
                    return method == Method::miso_agp ? run_miso_agp(loop, problem.sources, &writer, rows)
                                                      : run_vanilla_bo(loop, problem.sources, &writer, rows);
                };
                RunTrace trace;
                try {
                    trace = attempt(resume_rows);
                } catch (const InvalidArgument&) {
                    if (resume_rows.empty()) throw;
                    // the saved trace stops inside the initial design; start over
                    trace = attempt({});
                }
                write_meta(meta_path, method, run, seed, problem.space, "complete", &trace, "");
                log << "done " << trace_path.filename().string() << ": " << trace.loop_iterations
                    << " iterations, y+ = " << trace.augmented.y << "\n";
            } catch (const RunInterrupted& e) {
                const std::string token = trace_path.string() + "@" + std::to_string(e.resume_iteration());
                if (space) write_meta(meta_path, method, run, seed, *space, "interrupted", &e.partial(), token, e.what());
                result.status = exit_code::runtime;
                result.message = std::string(e.what()) + " (resume with --resume; token " + token + ")";
                break;
            } catch (const std::exception& e) {
                if (space) write_meta(meta_path, method, run, seed, *space, "failed", nullptr, "", e.what());
                result.status = exit_code::runtime;
                result.message = trace_path.filename().string() + ": " + e.what();
                break;
            }
        }
    }

    try {
        const auto summary = summarize(load_traces(out_dir));
        write_summary(summary, out_dir);
        result.summary = out_dir / "summary.csv";
    } catch (const std::exception& e) {
        if (result.status == exit_code::ok) {
            result.status = exit_code::runtime;
            result.message = std::string("summary failed: ") + e.what();
        }
    }
    if (!result.message.empty()) log << "error: " << result.message << "\n";
    return result;
}

}  // namespace misoagp
