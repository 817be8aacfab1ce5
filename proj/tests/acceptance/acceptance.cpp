// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Criteria with a runtime budget fail when
// the budget is exceeded. `--known-red NAME` (repeatable) names a criterion
// whose failure is documented and should not alone set the exit status; its
// line still reads FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include <CLI11.hpp>

#include "misoagp/misoagp.hpp"
#include "misoagp/random.hpp"
#include "support.hpp"

using namespace misoagp;
using testing_support::DensePosterior;
using testing_support::spread_points;
using testing_support::uniform_point;

namespace {

std::vector<std::string> g_notes;

struct Outcome {
    bool pass = false;
    std::string detail;
};

constexpr KernelFamily kFamilies[] = {KernelFamily::se, KernelFamily::matern32, KernelFamily::matern52,
                                      KernelFamily::rq};

KernelParams params(KernelFamily f, double l, double sf2 = 1.0, double alpha = 1.0) {
    KernelParams p;
    p.family = f;
    p.length_scale = l;
    p.signal_variance = sf2;
    p.rq_alpha = alpha;
    return p;
}

Eigen::VectorXd at(double v) { return Eigen::VectorXd::Constant(1, v); }

Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d, double min_gap) {
    std::normal_distribution<double> z;
    Dataset data;
    for (auto& x : spread_points(rng, n, d, min_gap)) data.add(x, 2.0 + 3.0 * z(rng));
    return data;
}

Dataset sample(const std::vector<double>& xs, const std::function<double(double)>& f) {
    Dataset d;
    for (double x : xs) d.add(at(x), f(x));
    return d;
}

SourceModelSet fixed_set(std::vector<Dataset> data, std::vector<double> costs, const KernelParams& p,
                         double noise = 0.0) {
    SourceModelSet set;
    for (auto& d : data) {
        set.models.push_back(GaussianProcess::fit(d, p, noise));
        set.datasets.push_back(std::move(d));
    }
    set.costs = std::move(costs);
    return set;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

Outcome gp_oracle() {
    std::mt19937_64 rng(4242);
    double worst_mean = 0.0, worst_var = 0.0, worst_weights = 0.0;
    for (int problem = 0; problem < 100; ++problem) {
        const std::size_t n = 1 + rng() % 12, dim = 1 + rng() % 3;
        const double noise = problem % 3 == 0 ? 0.0 : 1e-4;
        Dataset d;
        KernelParams p;
        for (;;) {  // keep the dense inverse trustworthy
            d = random_dataset(rng, n, dim, 0.04);
            p = params(kFamilies[problem % 4], 0.1 + 0.4 * std::uniform_real_distribution<>()(rng),
                       0.5 + std::uniform_real_distribution<>()(rng), 0.7);
            const auto m = static_cast<Eigen::Index>(n);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kernel_matrix(p, d.X) +
                                                              noise * Eigen::MatrixXd::Identity(m, m));
            if (es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() < 1e6) break;
        }
        const auto gp = GaussianProcess::fit(d, p, noise);
        const DensePosterior ref(d, p, noise);
        for (int q = 0; q < 20; ++q) {
            const auto x = uniform_point(rng, dim);
            const auto pr = gp.predict_standardized(x);
            worst_mean = std::max(worst_mean, std::abs(pr.mean - ref.mean(x)));
            worst_var = std::max(worst_var, std::abs(pr.variance - std::max(0.0, ref.variance(x))));
            worst_weights = std::max(worst_weights, std::abs(gp.weighted_mean_standardized(x) - pr.mean));
        }
    }
    return {worst_mean < 1e-8 && worst_var < 1e-8 && worst_weights < 1e-10,
            "max |dmu| " + fmt(worst_mean) + ", max |dvar| " + fmt(worst_var) + ", weight form " + fmt(worst_weights)};
}

Outcome lml_gradient() {
    std::mt19937_64 rng(1717);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 1e-5;
    double worst = 0.0;
    for (auto f : kFamilies)
        for (int config = 0; config < 20; ++config) {
            const auto d = random_dataset(rng, 6, 1 + rng() % 2, 0.05);
            const auto p = params(f, 0.1 + 0.6 * u(rng), 0.3 + 2.0 * u(rng), 0.3 + 3.0 * u(rng));
            const double noise = std::exp(std::log(1e-3) + 3.0 * u(rng));
            const auto gp = GaussianProcess::fit(d, p, noise);
            const auto g = gp.lml_gradient(true);
            Eigen::VectorXd theta(g.size());
            theta.head(p.n_hyper()) = p.log_vector();
            theta[g.size() - 1] = std::log(noise);
            auto lml_at = [&](const Eigen::VectorXd& t) {
                return GaussianProcess::fit(d, KernelParams::from_log(f, t.head(p.n_hyper())),
                                            std::exp(t[t.size() - 1]))
                    .log_marginal_likelihood();
            };
            for (Eigen::Index k = 0; k < g.size(); ++k) {
                Eigen::VectorXd tp = theta, tm = theta;
                tp[k] += h;
                tm[k] -= h;
                const double fd = (lml_at(tp) - lml_at(tm)) / (2 * h);
                if (std::abs(fd) < 1e-6 && std::abs(g[k]) < 1e-6) continue;
                worst = std::max(worst, testing_support::rel_err(g[k], fd));
            }
        }
    return {worst < 1e-4, "max relative error " + fmt(worst) + " over 80 configurations"};
}

Outcome interpolation() {
    std::mt19937_64 rng(99);
    double worst_mean = 0.0, worst_var = 0.0;
    int redrawn = 0;
    for (int fit = 0; fit < 50; ++fit) {
        const auto p = params(kFamilies[fit % 4], 0.25);
        Dataset d;
        for (;;) {  // same conditioning policy as the oracle check
            const std::size_t n = 2 + rng() % 10, dim = 1 + rng() % 3;
            d = random_dataset(rng, n, dim, 0.05);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kernel_matrix(p, d.X));
            if (es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() < 1e6) break;
            ++redrawn;
        }
        const auto gp = GaussianProcess::fit(d, p, 0.0);
        for (std::size_t i = 0; i < d.size(); ++i) {
            const auto pr = gp.predict(d.X[i]);
            worst_mean = std::max(worst_mean, std::abs(pr.mean - d.y[i]));
            worst_var = std::max(worst_var, pr.variance);
        }
    }
    return {worst_mean < 1e-8 && worst_var <= 1e-8, "max |mu - y| " + fmt(worst_mean) + ", max sigma^2 " +
                                                         fmt(worst_var) + " (" + std::to_string(redrawn) +
                                                         " draws with cond(K) >= 1e6 replaced)"};
}

Outcome ei_pi_monte_carlo() {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> z;
    const int samples = 1000000;
    double worst = 0.0;  // in standard errors
    for (int k = 0; k < 50; ++k) {
        const double mu = -1.0 + 2.0 * u(rng), sigma = 0.05 + u(rng), best = -1.0 + 2.0 * u(rng);
        const double xi = k % 2 ? 0.0 : 0.1 * u(rng);
        double hits = 0.0, gain = 0.0, gain_sq = 0.0;
        for (int s = 0; s < samples; ++s) {
            const double f = mu + sigma * z(rng);
            if (f <= best - xi) hits += 1.0;
            const double g = std::max(best - xi - f, 0.0);
            gain += g;
            gain_sq += g * g;
        }
        const double p = hits / samples, e = gain / samples;
        // standard errors of the estimators under the posterior itself; the
        // sample versions collapse to zero when no draw lands in the tail
        const double pi = probability_of_improvement(mu, sigma, best, xi);
        const double ei = expected_improvement(mu, sigma, best, xi);
        const double u_ = (best - xi - mu) / sigma;
        const double phi = std::exp(-0.5 * u_ * u_) / std::sqrt(2.0 * M_PI), cdf = 0.5 * std::erfc(-u_ / std::sqrt(2.0));
        const double second = sigma * sigma * ((u_ * u_ + 1.0) * cdf + u_ * phi);
        const double p_se = std::sqrt(pi * (1.0 - pi) / samples);
        const double e_se = std::sqrt(std::max(second - ei * ei, 0.0) / samples);
        (void)gain_sq;
        worst = std::max(worst, std::abs(pi - p) / std::max(p_se, 1e-300));
        worst = std::max(worst, std::abs(ei - e) / std::max(e_se, 1e-300));
    }
    return {worst <= 3.0, "worst deviation " + fmt(worst) + " standard errors"};
}

Outcome selection() {
    std::mt19937_64 rng(8080);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto p = params(KernelFamily::se, 0.25);
    int mismatches = 0, empty_m0 = 0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t S = 2 + k % 2;
        const double m = 0.5 + 2.0 * u(rng), bias = 0.5 * u(rng);
        std::vector<Dataset> data(S);
        for (std::size_t s = 0; s < S; ++s)
            for (const auto& x : spread_points(rng, s == 0 ? 4 : 8, 1, 0.03))
                data[s].add(x, std::sin(6 * x[0]) + (s == 0 ? 0.0 : bias * std::cos(9 * x[0] * s)));
        const auto set = fixed_set(data, std::vector<double>(S, 1.0), p, 1e-8);
        std::set<std::pair<std::size_t, std::size_t>> expected, got;
        const DensePosterior g1(set.datasets[0], p, 1e-8);
        const auto s1 = testing_support::standardize(set.datasets[0].y);
        for (std::size_t z = 1; z < S; ++z) {
            const DensePosterior gz(set.datasets[z], p, 1e-8);
            const auto sz = testing_support::standardize(set.datasets[z].y);
            for (std::size_t i = 0; i < set.datasets[z].size(); ++i) {
                const auto& x = set.datasets[z].X[i];
                const double eta = std::abs(s1.mean + s1.scale * g1.mean(x) - (sz.mean + sz.scale * gz.mean(x)));
                if (eta < m * s1.scale * std::sqrt(std::max(g1.variance(x), 0.0))) expected.insert({z, i});
            }
        }
        for (const auto& r : select_reliable(set, m)) got.insert({r.origin_source, r.record_index});
        mismatches += got != expected;
        empty_m0 += select_reliable(set, 0.0).empty();
    }
    auto single = fixed_set({sample({0.1, 0.5, 0.9}, [](double x) { return x * x; })}, {1.0}, p);
    const bool s1_empty = select_reliable(single, 1e6).empty();
    return {mismatches == 0 && empty_m0 == 100 && s1_empty,
            std::to_string(mismatches) + " set mismatches in 100, m = 0 empty in " + std::to_string(empty_m0) +
                ", S = 1 empty " + (s1_empty ? "yes" : "no")};
}

Outcome acquisition_argmax() {
    std::mt19937_64 rng(3030);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Eigen::VectorXd> grid;
    for (int i = 0; i < 1000; ++i) grid.push_back(at(i / 999.0));
    const auto f1 = [](double x) { return (x - 0.7) * (x - 0.7); };
    int mismatches = 0;
    for (int k = 0; k < 20; ++k) {
        const double bias = u(rng), c2 = 0.05 + u(rng);
        auto set = fixed_set({sample({0.1, 0.35, 0.6, 0.9}, f1),
                              sample({0.05, 0.2, 0.45, 0.7, 0.8, 0.95}, [&](double x) { return f1(x) + bias * x; })},
                             {1.0, c2}, params(KernelFamily::se, 0.15 + 0.2 * u(rng)));
        const auto agp = build_agp(set, 1.0 + u(rng), MleConfig{}, static_cast<std::uint64_t>(k));
        const double b = 0.5 + 4.0 * u(rng);
        const auto got = propose_on_candidates(agp.model, set, b, grid);
        double best = -INFINITY;
        std::size_t bs = 0, bi = 0;
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto pr = agp.model.predict(grid[i]);
                const double eta = std::abs(pr.mean - set.models[s].predict(grid[i]).mean);
                const double v = -(pr.mean - std::sqrt(b) * std::sqrt(pr.variance)) / (set.costs[s] * (1.0 + eta));
                if (v > best || (v == best && set.costs[s] < set.costs[bs])) best = v, bs = s, bi = i;
            }
        mismatches += got.source != bs || got.x != grid[bi];
    }

    auto one = fixed_set({sample({0.05, 0.3, 0.55, 0.9}, [](double x) { return std::sin(8 * x) + x; })}, {1.0},
                         params(KernelFamily::se, 0.2));
    double lo = INFINITY, argmin = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        const double v = lcb(one.models[0], at(i / 100000.0), 2.0);
        if (v < lo) lo = v, argmin = i / 100000.0;
    }
    MisoAcquisitionConfig cfg;
    cfg.delta = 1e-12;
    const double gap = std::abs(propose(one.models[0], one, 2.0, cfg, 5).x[0] - argmin);
    return {mismatches == 0 && gap < 1e-4,
            std::to_string(mismatches) + " grid mismatches in 20, S = 1 distance to LCB minimizer " + fmt(gap)};
}

Outcome correction() {
    const auto d1 = sample({0.0, 0.2, 0.8, 1.0}, [](double) { return 0.0; });
    auto set = fixed_set({d1, sample({0.5}, [](double) { return -10.0; })}, {1.0, 1.0}, params(KernelFamily::se, 0.15));
    Dataset dhat = d1;
    dhat.add(at(0.5), -10.0);
    const auto agp = GaussianProcess::fit(dhat, params(KernelFamily::se, 0.05), 0.0);
    MisoAcquisitionConfig cfg;
    cfg.delta = 1e-3;
    const auto prop = propose(agp, set, 1.0, cfg, 3);
    double hi = -1.0, where = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        const auto x = at(i / 100000.0);
        if (near_existing(set.datasets[0], x, cfg.delta)) continue;
        const double v = set.models[0].predict(x).variance;
        if (v > hi) hi = v, where = i / 100000.0;
    }
    const double gap = std::abs(prop.x[0] - where);
    const bool triggered = prop.corrected && prop.source == 0 && gap < 1e-3;

    // delta -> 0+: once delta drops below the squared separation between the
    // argmax and the nearest record of its source, the same proposal stands
    double separation = INFINITY;
    for (const auto& x : set.datasets[prop.argmax_source].X)
        separation = std::min(separation, (x - prop.argmax_x).squaredNorm());
    std::size_t limit_corrected = 0, limit_checked = 0;
    for (double delta : {separation / 2.0, separation / 1e6, 1e-300}) {
        if (!(delta > 0.0) || delta >= separation) continue;
        MisoAcquisitionConfig small = cfg;
        small.delta = delta;
        ++limit_checked;
        limit_corrected += propose(agp, set, 1.0, small, 3).corrected;
    }

    // full runs: a correction at delta = 1e-300 means an exact repeat, which
    // is reported but is the intended behaviour
    auto b = make_benchmark("biased-quadratic-2src");
    LoopConfig lc;
    lc.space = b.space;
    lc.max_iterations = 20;
    lc.acquisition.delta = 1e-300;
    std::size_t exact_repeats = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        lc.seed = seed;
        for (const auto& r : run_miso_agp(lc, b.sources).rows) exact_repeats += r.corrected;
    }
    g_notes.push_back("  info: correction: " + std::to_string(exact_repeats) +
                      " exact-repeat corrections across 3 full runs at delta 1e-300");
    return {triggered && separation > 0.0 && limit_checked > 0 && limit_corrected == 0,
            std::string("near-duplicate ") + (prop.corrected ? "corrected" : "not corrected") + " to source " +
                std::to_string(prop.source + 1) + ", distance to sigma_1 argmax " + fmt(gap) +
                "; squared separation " + fmt(separation) + ", corrections below it " +
                std::to_string(limit_corrected) + "/" + std::to_string(limit_checked)};
}

Outcome reduction() {
    auto b = make_benchmark("forrester-2src", {{"cost1", 1.0}});
    SourceList only;
    only.push_back(std::move(b.sources[0]));
    std::size_t compared = 0, differing = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        LoopConfig c;
        c.space = b.space;
        c.seed = seed;
        c.max_iterations = 15;
        c.acquisition.delta = 1e-300;
        const auto m = run_miso_agp(c, only), v = run_vanilla_bo(c, only);
        if (m.rows.size() != v.rows.size()) return {false, "different trace lengths"};
        for (std::size_t i = 0; i < m.rows.size(); ++i, ++compared)
            differing += m.rows[i].x != v.rows[i].x || m.rows[i].y != v.rows[i].y;
    }
    return {differing == 0, std::to_string(differing) + " differing queries out of " + std::to_string(compared)};
}

struct DeskRun {
    double first_hit = INFINITY;
    double final_abs = 0.0;
    double share = 0.0;
};

DeskRun desk_run(bool miso, std::uint64_t seed, const MisoAcquisitionConfig& acq, KernelFamily kernel) {
    auto b = make_benchmark("biased-quadratic-2src");
    LoopConfig c;
    c.space = b.space;
    c.seed = seed;
    c.n_init = 3;
    c.max_iterations = 30;
    c.acquisition = acq;
    c.mle.family = kernel;
    const auto t = miso ? run_miso_agp(c, b.sources) : run_vanilla_bo(c, b.sources);
    DeskRun r;
    std::size_t loop = 0, cheap = 0;
    for (const auto& row : t.rows) {
        const double y = miso ? row.augmented_best_seen : row.best_seen;
        if (y <= 1e-2 && std::isinf(r.first_hit)) r.first_hit = row.nominal_cost_cum;
        if (row.iteration > 0) ++loop, cheap += row.source != 1;
    }
    r.final_abs = std::abs(miso ? t.rows.back().augmented_best_seen : t.rows.back().best_seen);
    r.share = loop ? static_cast<double>(cheap) / static_cast<double>(loop) : 0.0;
    return r;
}

struct DeskStats {
    double median_cost = 0.0;
    double share = 0.0;
    double median_final = 0.0;
};

DeskStats desk_stats(bool miso, const MisoAcquisitionConfig& acq, KernelFamily kernel = KernelFamily::se) {
    std::vector<double> costs, finals;
    double share = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto r = desk_run(miso, seed, acq, kernel);
        costs.push_back(r.first_hit);
        finals.push_back(r.final_abs);
        share += r.share;
    }
    return {median(costs), share / 10.0, median(finals)};
}


Outcome desk_scale() {
    const MisoAcquisitionConfig defaults;
    const auto m = desk_stats(true, defaults), v = desk_stats(false, defaults);
    const bool cheaper = m.median_cost < v.median_cost, mostly_cheap = m.share > 0.5;

    // informational: how the outcome moves under alternative settings
    auto note = [](const std::string& label, const DeskStats& s, const DeskStats& ref) {
        g_notes.push_back("  info: " + label + ": MISO median cost " + fmt(s.median_cost) + " (vanilla " +
                          fmt(ref.median_cost) + "), cheap share " + fmt(s.share) + ", median final |y+| " +
                          fmt(s.median_final));
    };
    note("defaults", m, v);
    MisoAcquisitionConfig shifted;
    shifted.shift_numerator = true;
    note("shift_numerator = true", desk_stats(true, shifted), v);

    return {cheaper && mostly_cheap, "median cost to y+ <= 1e-2: MISO " + fmt(m.median_cost) + " vs vanilla " +
                                         fmt(v.median_cost) + (cheaper ? " (lower)" : " (not lower)") +
                                         "; cheap-source share " + fmt(m.share)};
}

Outcome determinism() {
    const auto a = testing_support::scratch_dir("acceptance_det_a");
    const auto b = testing_support::scratch_dir("acceptance_det_b");
    std::ostringstream log;
    for (const auto* name : {"biased-quadratic-2src", "forrester-2src", "region-biased-2src"}) {
        auto cfg = parse_config(std::string(R"({"sources": {"benchmark": ")") + name +
                                R"("}, "n_runs": 2, "max_iterations": 8})");
        if (run_experiment(cfg, {std::nullopt, a / name, false}, log).status != 0 ||
            run_experiment(cfg, {std::nullopt, b / name, false}, log).status != 0)
            return {false, std::string("run failed on ") + name};
    }
    std::size_t files = 0, differing = 0;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        const auto rel = std::filesystem::relative(entry.path(), a);
        ++files;
        differing += testing_support::slurp(entry.path()) != testing_support::slurp(b / rel);
    }
    return {files > 0 && differing == 0, std::to_string(differing) + " of " + std::to_string(files) + " files differ"};
}

Outcome non_monotone() {
    const auto p = params(KernelFamily::se, 0.2);
    const auto cheap = sample({0.5}, [](double) { return -1.0; });
    auto before = fixed_set({sample({0.05, 0.95}, [](double) { return 0.0; }), cheap}, {10.0, 1.0}, p);
    auto after = fixed_set({sample({0.05, 0.5, 0.95}, [](double) { return 0.0; }), cheap}, {10.0, 1.0}, p);
    const double y0 = augmented_best_seen(build_agp(before, 2.0, MleConfig{}, 0));
    const double y1 = augmented_best_seen(build_agp(after, 2.0, MleConfig{}, 0));
    return {y1 > y0, "augmented best-seen went from " + fmt(y0) + " to " + fmt(y1) + " after deselection"};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> known_red;
    CLI::App app{"misoagp acceptance checks"};
    app.add_option("--known-red", known_red, "criterion whose failure is documented and tolerated");
    CLI11_PARSE(app, argc, argv);

    struct Criterion {
        const char* name;
        Outcome (*run)();
        double budget_seconds;
    };
    const Criterion criteria[] = {
        {"gp-oracle-equivalence", gp_oracle, 10.0},
        {"lml-gradient-finite-differences", lml_gradient, 30.0},
        {"noise-free-interpolation", interpolation, INFINITY},
        {"ei-pi-monte-carlo", ei_pi_monte_carlo, INFINITY},
        {"reliable-selection-enumeration", selection, INFINITY},
        {"acquisition-argmax-enumeration", acquisition_argmax, INFINITY},
        {"repeat-query-correction", correction, INFINITY},
        {"single-source-reduction", reduction, INFINITY},
        {"desk-scale-miso-win", desk_scale, 300.0},
        {"determinism", determinism, INFINITY},
        {"augmented-best-seen-non-monotone", non_monotone, INFINITY},
    };
    for (const auto& name : known_red)
        if (std::none_of(std::begin(criteria), std::end(criteria), [&](const auto& c) { return name == c.name; })) {
            std::fprintf(stderr, "unknown criterion '%s'\n", name.c_str());
            return 2;
        }
    int failures = 0, tolerated = 0;
    for (const auto& c : criteria) {
        g_notes.clear();
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            o.pass = false;
            o.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
        }
        const bool expected = std::find(known_red.begin(), known_red.end(), c.name) != known_red.end();
        failures += !o.pass;
        tolerated += !o.pass && expected;
        std::printf("%s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
        for (const auto& n : g_notes) std::printf("%s\n", n.c_str());
        if (!o.pass && expected) std::printf("  known red: failure documented, not counted toward the exit status\n");
        if (o.pass && expected) std::printf("  note: listed as known red but passed\n");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    if (tolerated) std::printf(" (%d failing criterion known red)", tolerated);
    std::printf("\n");
    return failures == tolerated ? 0 : 1;
}
