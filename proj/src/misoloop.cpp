#include "misoagp/misoloop.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "misoagp/random.hpp"

namespace misoagp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t init_count(const LoopConfig& config, std::size_t s) {
    return config.n_init_per_source.empty() ? config.n_init : config.n_init_per_source.at(s);
}

/// Mutable bookkeeping shared by both loops.
class RunState {
public:
    RunState(const LoopConfig& config, SourceList& sources, std::size_t used_sources, TraceObserver* observer)
        : config_(config), sources_(sources), observer_(observer), datasets_(used_sources) {}

    void restore(const std::vector<TraceRow>& rows) {
        for (const auto& row : rows) {
            if (row.source < 1 || row.source > datasets_.size())
                throw InvalidArgument("resume: trace row references unknown source " + std::to_string(row.source));
            EvaluationRecord rec;
            rec.source = row.source - 1;
            rec.raw = row.x;
            rec.x = config_.space.to_internal(row.x);
            rec.y = row.y;
            rec.nominal_cost = sources_[rec.source]->cost();
            rec.actual_cost = row.actual_cost_cum - actual_cum_;
            rec.iteration = row.iteration;
            add(rec);
            trace_.rows.push_back(row);
            if (row.iteration > 0) {
                loop_cost_ += rec.nominal_cost;
                loop_iterations_ = std::max(loop_iterations_, row.iteration);
            }
        }
        for (std::size_t s = 0; s < datasets_.size(); ++s)
            if (datasets_[s].size() < init_count(config_, s))
                throw InvalidArgument("resume: trace does not contain the complete initial design");
    }

    void run_initial_design() {
        for (auto& rec : initialize(config_.space, sources_, config_, datasets_.size())) {
            add(rec);
            emit(make_row(trace_.records.back(), d1().size(), false));
        }
    }

    bool keep_going() const {
        return loop_cost_ < config_.max_cost && loop_iterations_ < config_.max_iterations;
    }
    std::size_t next_iteration() const { return loop_iterations_ + 1; }

    /// Completes the pending loop row with the current D-hat and writes it.
    void settle(double dhat_best, std::size_t dhat_size) {
        if (!pending_) return;
        pending_->augmented_best_seen = dhat_best;
        pending_->dhat_size = dhat_size;
        emit(*pending_);
        pending_.reset();
    }

    void query(std::size_t source, const UnitPoint& x, bool corrected) {
        const RawPoint raw = config_.space.from_internal(x);
        Evaluation e;
        try {
            e = sources_[source]->evaluate(raw);
        } catch (const Error& err) {
            throw RunInterrupted("source " + std::to_string(source + 1) + " failed at iteration " +
                                     std::to_string(next_iteration()) + ": " + err.what(),
                                 trace_, loop_iterations_);
        }
        EvaluationRecord rec{source, x, raw, e.y, sources_[source]->cost(), actual_cost(source, e),
                             next_iteration()};
        add(rec);
        loop_cost_ += rec.nominal_cost;
        ++loop_iterations_;
        pending_ = make_row(trace_.records.back(), 0, corrected);
    }

    std::vector<Dataset>& datasets() { return datasets_; }
    const Dataset& d1() const { return datasets_[0]; }

    RunTrace finish(const std::vector<AugmentedRecord>& dhat) {
        trace_.loop_iterations = loop_iterations_;
        const auto best = std::min_element(dhat.begin(), dhat.end(),
                                           [](const auto& a, const auto& b) { return a.y < b.y; });
        if (best != dhat.end())
            trace_.augmented = {config_.space.from_internal(best->x), best->y, best->origin_source + 1};
        std::optional<std::size_t> cons;
        for (std::size_t i = 0; i < trace_.records.size(); ++i) {
            const auto& r = trace_.records[i];
            if (r.source == 0 && (!cons || r.y < trace_.records[*cons].y)) cons = i;
        }
        if (cons) trace_.conservative = {trace_.records[*cons].raw, trace_.records[*cons].y, 1};
        return std::move(trace_);
    }

private:
    double actual_cost(std::size_t source, const Evaluation& e) const {
        // analytic sources report no wall time; their nominal cost stands in
        return sources_[source]->kind() == SourceKind::analytic ? sources_[source]->cost() : e.actual_cost;
    }

    void add(const EvaluationRecord& rec) {
        datasets_[rec.source].add(rec.x, rec.y);
        nominal_cum_ += rec.nominal_cost;
        actual_cum_ += rec.actual_cost;
        if (rec.source == 0) best_ = std::min(best_.value_or(rec.y), rec.y);
        trace_.records.push_back(rec);
    }

    TraceRow make_row(const EvaluationRecord& rec, std::size_t dhat_size, bool corrected) const {
        TraceRow row;
        row.iteration = rec.iteration;
        row.source = rec.source + 1;
        row.x = rec.raw;
        row.y = rec.y;
        row.nominal_cost_cum = nominal_cum_;
        row.actual_cost_cum = actual_cum_;
        row.best_seen = best_.value_or(kNaN);
        row.augmented_best_seen = row.best_seen;
        row.dhat_size = dhat_size;
        row.corrected = corrected;
        return row;
    }

    void emit(const TraceRow& row) {
        trace_.rows.push_back(row);
        if (observer_) observer_->on_row(row);
    }

    const LoopConfig& config_;
    SourceList& sources_;
    TraceObserver* observer_;
    std::vector<Dataset> datasets_;
    RunTrace trace_;
    std::optional<TraceRow> pending_;
    std::optional<double> best_;
    double nominal_cum_ = 0.0;
    double actual_cum_ = 0.0;
    double loop_cost_ = 0.0;
    std::size_t loop_iterations_ = 0;
};

void check_config(const LoopConfig& config, const SourceList& sources, std::size_t used) {
    if (sources.size() < used || used == 0) throw InvalidArgument("loop: not enough sources configured");
    if (config.space.dim() == 0) throw InvalidArgument("loop: empty search space");
    if (!config.n_init_per_source.empty() && config.n_init_per_source.size() < used)
        throw InvalidArgument("loop: n_init_per_source must list every source");
    if (init_count(config, 0) < 1) throw InvalidArgument("loop: source 1 needs at least one initial evaluation");
}

BetaSchedule schedule_for(const LoopConfig& config) {
    BetaSchedule b = config.beta;
    b.dim = config.space.dim();
    return b;
}

SourceModelSet train_sources(const LoopConfig& config, std::vector<Dataset>& datasets, const SourceList& sources,
                             std::size_t iteration) {
    SourceModelSet set;
    for (std::size_t s = 0; s < datasets.size(); ++s) {
        set.datasets.push_back(datasets[s]);
        set.models.push_back(
            train_model(datasets[s], config.mle, derive_seed(config.seed, {seed_tag::source_model, iteration, s})));
        set.costs.push_back(sources[s]->cost());
    }
    return set;
}

double min_y(const std::vector<AugmentedRecord>& records) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : records) m = std::min(m, r.y);
    return m;
}

}  // namespace

std::vector<EvaluationRecord> initialize(const SearchSpace& space, SourceList& sources, const LoopConfig& config,
                                         std::size_t sources_to_use) {
    std::vector<EvaluationRecord> out;
    const auto shared = latin_hypercube(space, std::max<std::size_t>(config.n_init, 1),
                                        derive_seed(config.seed, {seed_tag::init_design}), config.lhs);
    for (std::size_t s = 0; s < sources_to_use; ++s) {
        const std::size_t n = init_count(config, s);
        if (n == 0) continue;
        const auto design = config.n_init_per_source.empty()
                                ? shared
                                : latin_hypercube(space, n, derive_seed(config.seed, {seed_tag::init_design, s}),
                                                  config.lhs);
        for (const auto& u : design) {
            EvaluationRecord rec;
            rec.source = s;
            rec.x = u;
            rec.raw = space.from_internal(u);
            Evaluation e;
            try {
                e = sources[s]->evaluate(rec.raw);
            } catch (const Error& err) {
                throw SourceEvaluationError("initialization failed on source " + std::to_string(s + 1) + ": " +
                                            err.what());
            }
            rec.y = e.y;
            rec.nominal_cost = sources[s]->cost();
            rec.actual_cost = sources[s]->kind() == SourceKind::analytic ? rec.nominal_cost : e.actual_cost;
            rec.iteration = 0;
            out.push_back(std::move(rec));
        }
    }
    return out;
}

std::vector<double> best_seen(std::span<const double> values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(out.empty() ? v : std::min(out.back(), v));
    return out;
}

double best_seen_value(const std::vector<EvaluationRecord>& records) {
    std::optional<double> best;
    for (const auto& r : records)
        if (r.source == 0) best = std::min(best.value_or(r.y), r.y);
    if (!best) throw UndefinedIncumbent("no source-1 evaluations yet");
    return *best;
}

double augmented_best_seen(const AugmentedDataset& dhat) { return dhat.incumbent().y; }

RunTrace run_miso_agp(const LoopConfig& config, SourceList& sources, TraceObserver* observer,
                      const std::vector<TraceRow>& resume_rows) {
    const std::size_t S = sources.size();
    check_config(config, sources, S);
    const BetaSchedule schedule = schedule_for(config);

    RunState state(config, sources, S, observer);
    if (resume_rows.empty())
        state.run_initial_design();
    else
        state.restore(resume_rows);

    while (state.keep_going()) {
        const std::size_t it = state.next_iteration();
        const auto models = train_sources(config, state.datasets(), sources, it);
        const auto dhat = build_agp(models, config.acquisition.m, config.mle,
                                    derive_seed(config.seed, {seed_tag::agp_model, it}));
        state.settle(min_y(dhat.records), dhat.size());
        const double b = beta(schedule, dhat.size());
        const auto proposal =
            propose(dhat.model, models, b, config.acquisition, derive_seed(config.seed, {seed_tag::acquisition, it}));
        state.query(proposal.source, proposal.x, proposal.corrected);
    }

    // output step: rebuild D-hat on the final data
    const std::size_t it = state.next_iteration();
    const auto models = train_sources(config, state.datasets(), sources, it);
    auto records = merge_augmented(models, select_reliable(models, config.acquisition.m));
    state.settle(min_y(records), records.size());
    return state.finish(records);
}

RunTrace run_vanilla_bo(const LoopConfig& config, SourceList& sources, TraceObserver* observer,
                        const std::vector<TraceRow>& resume_rows) {
    check_config(config, sources, 1);
    const BetaSchedule schedule = schedule_for(config);
    const std::size_t d = config.space.dim();

    RunState state(config, sources, 1, observer);
    if (resume_rows.empty())
        state.run_initial_design();
    else
        state.restore(resume_rows);

    while (state.keep_going()) {
        const std::size_t it = state.next_iteration();
        const Dataset& d1 = state.d1();
        const auto gp = train_model(d1, config.mle, derive_seed(config.seed, {seed_tag::source_model, it, 0}));
        state.settle(*std::min_element(d1.y.begin(), d1.y.end()), d1.size());
        const double b = beta(schedule, d1.size());
        const ScalarField neg_lcb = [&](const Eigen::VectorXd& x) { return -lcb(gp, x, b); };
        const auto seed = derive_seed(derive_seed(config.seed, {seed_tag::acquisition, it}), {0});
        const auto opt = optimize_acquisition(neg_lcb, d, config.acquisition.inner, seed);
        state.query(0, opt.x, false);
    }

    std::vector<AugmentedRecord> d1_records;
    for (std::size_t i = 0; i < state.d1().size(); ++i)
        d1_records.push_back({state.d1().X[i], state.d1().y[i], 0, i, SelectionReason::from_d1});
    state.settle(min_y(d1_records), d1_records.size());
    return state.finish(d1_records);
}

}  // namespace misoagp
