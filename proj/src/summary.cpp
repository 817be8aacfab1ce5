#include "misoagp/summary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>

#include "misoagp/errors.hpp"

namespace misoagp {

namespace {

double cum_cost(const TraceRow& row, CostAxis axis) {
    return axis == CostAxis::nominal ? row.nominal_cost_cum : row.actual_cost_cum;
}

struct MeanStd {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double std = std::numeric_limits<double>::quiet_NaN();
};

MeanStd mean_std(const std::vector<double>& v) {
    if (v.empty()) return {};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

const char* axis_name(CostAxis axis) { return axis == CostAxis::nominal ? "nominal" : "actual"; }

}  // namespace

std::optional<double> cost_to_reach(const TraceFile& trace, double target, CostAxis axis, bool use_augmented) {
    for (const auto& row : trace.rows) {
        const double v = use_augmented ? row.augmented_best_seen : row.best_seen;
        if (v <= target) return cum_cost(row, axis);
    }
    return std::nullopt;
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    const double a = values[n / 2 - 1], b = values[n / 2];
    return std::isinf(a) || std::isinf(b) ? std::max(a, b) : 0.5 * (a + b);
}

Summary summarize(const std::vector<LabeledTrace>& traces, std::optional<double> target, std::size_t grid_points) {
    if (traces.empty()) throw SchemaError("summarize: no traces");
    const std::size_t dims = traces.front().trace.dims;
    for (const auto& t : traces) {
        if (t.trace.dims != dims) throw SchemaError("summarize: traces have different column sets");
        if (t.trace.rows.empty()) throw SchemaError("summarize: empty trace for " + t.method);
    }
    grid_points = std::max<std::size_t>(grid_points, 2);

    std::vector<std::string> methods;
    for (const auto& t : traces)
        if (std::find(methods.begin(), methods.end(), t.method) == methods.end()) methods.push_back(t.method);

    auto runs_of = [&](const std::string& m) {
        std::vector<const TraceFile*> out;
        for (const auto& t : traces)
            if (t.method == m) out.push_back(&t.trace);
        return out;
    };

    Summary summary;
    if (target) {
        summary.target = *target;
    } else {
        const std::string ref = std::find(methods.begin(), methods.end(), "vanilla_bo") != methods.end()
                                    ? "vanilla_bo"
                                    : methods.front();
        std::vector<double> finals;
        for (const auto* t : runs_of(ref))
            finals.push_back(ref == "vanilla_bo" ? t->rows.back().best_seen : t->rows.back().augmented_best_seen);
        summary.target = mean_std(finals).mean;
    }

    double max_cost[2] = {0.0, 0.0};
    for (const auto& t : traces) {
        max_cost[0] = std::max(max_cost[0], t.trace.rows.back().nominal_cost_cum);
        max_cost[1] = std::max(max_cost[1], t.trace.rows.back().actual_cost_cum);
    }

    for (const auto& m : methods) {
        const auto runs = runs_of(m);
        MethodSummary ms;
        ms.method = m;
        ms.runs = runs.size();
        std::vector<double> fb, fa, nc, ac, to_nom, to_act;
        std::size_t loop_queries = 0, cheap = 0;
        for (const auto* t : runs) {
            fb.push_back(t->rows.back().best_seen);
            fa.push_back(t->rows.back().augmented_best_seen);
            nc.push_back(t->rows.back().nominal_cost_cum);
            ac.push_back(t->rows.back().actual_cost_cum);
            for (const auto& row : t->rows) {
                if (row.iteration == 0) continue;
                ++loop_queries;
                if (row.source != 1) ++cheap;
            }
            const double inf = std::numeric_limits<double>::infinity();
            to_nom.push_back(cost_to_reach(*t, summary.target, CostAxis::nominal).value_or(inf));
            to_act.push_back(cost_to_reach(*t, summary.target, CostAxis::actual).value_or(inf));
        }
        const auto b = mean_std(fb), a = mean_std(fa);
        ms.final_best_seen_mean = b.mean;
        ms.final_best_seen_std = b.std;
        ms.final_augmented_best_seen_mean = a.mean;
        ms.final_augmented_best_seen_std = a.std;
        ms.nominal_cost_mean = mean_std(nc).mean;
        ms.actual_cost_mean = mean_std(ac).mean;
        ms.cheap_source_share = loop_queries ? static_cast<double>(cheap) / static_cast<double>(loop_queries) : 0.0;
        ms.median_nominal_cost_to_target = median(to_nom);
        ms.median_actual_cost_to_target = median(to_act);

        for (CostAxis axis : {CostAxis::nominal, CostAxis::actual}) {
            const double top = max_cost[axis == CostAxis::nominal ? 0 : 1];
            auto& curve = ms.curves[axis];
            for (std::size_t g = 0; g < grid_points; ++g) {
                const double c = top * static_cast<double>(g) / static_cast<double>(grid_points - 1);
                std::vector<double> bs, abs;
                for (const auto* t : runs) {
                    const TraceRow* last = nullptr;
                    for (const auto& row : t->rows) {
                        if (cum_cost(row, axis) <= c) last = &row;
                        else break;
                    }
                    if (!last) continue;
                    bs.push_back(last->best_seen);
                    abs.push_back(last->augmented_best_seen);
                }
                const auto mb = mean_std(bs), ma = mean_std(abs);
                curve.push_back({c, mb.mean, mb.std, ma.mean, ma.std, bs.size()});
            }
        }
        summary.methods.push_back(std::move(ms));
    }

    const auto vanilla = std::find_if(summary.methods.begin(), summary.methods.end(),
                                      [](const auto& ms) { return ms.method == "vanilla_bo"; });
    if (vanilla != summary.methods.end()) {
        const double ref = vanilla->median_nominal_cost_to_target;
        for (auto& ms : summary.methods)
            ms.cost_to_match_ratio = ref > 0.0 && std::isfinite(ref) ? ms.median_nominal_cost_to_target / ref
                                                                       : std::numeric_limits<double>::quiet_NaN();
    }
    return summary;
}

std::vector<LabeledTrace> load_traces(const std::filesystem::path& dir) {
    static const std::regex name_re(R"(trace_([a-z_]+)_run([0-9]+)\.csv)");
    std::vector<LabeledTrace> out;
    if (!std::filesystem::is_directory(dir)) throw SchemaError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        std::smatch m;
        const std::string name = p.filename().string();
        if (!std::regex_match(name, m, name_re)) continue;
        out.push_back({m[1].str(), static_cast<std::size_t>(std::stoul(m[2].str())), read_trace_csv(p)});
    }
    if (out.empty()) throw SchemaError("no trace files found in " + dir.string());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.method != b.method ? a.method < b.method : a.run < b.run;
    });
    return out;
}

void write_summary(const Summary& summary, const std::filesystem::path& dir) {
    std::ofstream s(dir / "summary.csv");
    if (!s) throw Error("cannot write " + (dir / "summary.csv").string());
    s << "method,runs,final_best_seen_mean,final_best_seen_std,final_augmented_best_seen_mean,"
         "final_augmented_best_seen_std,nominal_cost_mean,actual_cost_mean,cheap_source_share,target,"
         "median_nominal_cost_to_target,median_actual_cost_to_target,cost_to_match_ratio\n";
    for (const auto& m : summary.methods) {
        s << m.method << ',' << m.runs << ',' << format_double(m.final_best_seen_mean) << ','
          << format_double(m.final_best_seen_std) << ',' << format_double(m.final_augmented_best_seen_mean) << ','
          << format_double(m.final_augmented_best_seen_std) << ',' << format_double(m.nominal_cost_mean) << ','
          << format_double(m.actual_cost_mean) << ',' << format_double(m.cheap_source_share) << ','
          << format_double(summary.target) << ',' << format_double(m.median_nominal_cost_to_target) << ','
          << format_double(m.median_actual_cost_to_target) << ',' << format_double(m.cost_to_match_ratio) << '\n';
    }

    std::ofstream c(dir / "curves.csv");
    if (!c) throw Error("cannot write " + (dir / "curves.csv").string());
    c << "method,cost_axis,cost,best_seen_mean,best_seen_std,augmented_best_seen_mean,augmented_best_seen_std,runs\n";
    for (const auto& m : summary.methods)
        for (const auto& [axis, curve] : m.curves)
            for (const auto& p : curve)
                c << m.method << ',' << axis_name(axis) << ',' << format_double(p.cost) << ','
                  << format_double(p.best_seen_mean) << ',' << format_double(p.best_seen_std) << ','
                  << format_double(p.augmented_best_seen_mean) << ',' << format_double(p.augmented_best_seen_std)
                  << ',' << p.runs << '\n';
}

}  // namespace misoagp
