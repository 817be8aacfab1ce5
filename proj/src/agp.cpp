#include "misoagp/agp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "misoagp/errors.hpp"
#include "misoagp/random.hpp"
#include "misoagp/spaces.hpp"

namespace misoagp {

void SourceModelSet::validate() const {
    if (datasets.empty()) throw InvalidArgument("source model set: at least one source required");
    if (models.size() != datasets.size() || costs.size() != datasets.size())
        throw InvalidArgument("source model set: datasets, models and costs differ in length");
    for (double c : costs)
        if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("source model set: costs must be positive");
}

double discrepancy(const GaussianProcess& g, const GaussianProcess& g2, const Eigen::VectorXd& x) {
    return std::abs(g.predict(x).mean - g2.predict(x).mean);
}

bool is_reliable(const SourceModelSet& models, std::size_t z, const Eigen::VectorXd& x, double m) {
    const auto& g1 = models.models[0];
    const double sigma1 = std::sqrt(g1.predict(x).variance);
    return discrepancy(g1, models.models[z], x) < m * sigma1;
}

std::vector<AugmentedRecord> select_reliable(const SourceModelSet& models, double m) {
    models.validate();
    if (!(m >= 0.0)) throw InvalidArgument("select_reliable: m must be >= 0");
    std::vector<AugmentedRecord> out;
    for (std::size_t z = 1; z < models.num_sources(); ++z) {
        const auto& data = models.datasets[z];
        for (std::size_t i = 0; i < data.size(); ++i)
            if (is_reliable(models, z, data.X[i], m))
                out.push_back({data.X[i], data.y[i], z, i, SelectionReason::reliable});
    }
    return out;
}

Dataset AugmentedDataset::as_dataset() const {
    Dataset d;
    for (const auto& r : records) d.add(r.x, r.y);
    return d;
}

const AugmentedRecord& AugmentedDataset::incumbent() const {
    if (records.empty()) throw UndefinedIncumbent("augmented dataset is empty");
    // first minimum wins, so D1 records are preferred on ties
    return *std::min_element(records.begin(), records.end(),
                             [](const auto& a, const auto& b) { return a.y < b.y; });
}

std::vector<AugmentedRecord> merge_augmented(const SourceModelSet& models, std::vector<AugmentedRecord> reliable) {
    std::vector<AugmentedRecord> merged;
    const auto& d1 = models.datasets[0];
    for (std::size_t i = 0; i < d1.size(); ++i) merged.push_back({d1.X[i], d1.y[i], 0, i, SelectionReason::from_d1});

    auto seen = [&](const AugmentedRecord& r) {
        return std::any_of(merged.begin(), merged.end(), [&](const AugmentedRecord& e) {
            return (e.origin_source == 0 || e.origin_source == r.origin_source) && e.x == r.x;
        });
    };
    for (auto& r : reliable)
        if (!seen(r)) merged.push_back(std::move(r));
    return merged;
}

AugmentedDataset build_agp(const SourceModelSet& models, double m, const MleConfig& mle, std::uint64_t seed) {
    auto records = merge_augmented(models, select_reliable(models, m));
    if (records.empty()) throw EmptyAugmentedSet("augmented dataset is empty: source 1 has no evaluations");
    const bool only_d1 = std::all_of(records.begin(), records.end(),
                                     [](const auto& r) { return r.reason == SelectionReason::from_d1; });
    if (only_d1) return {std::move(records), models.models[0]};
    AugmentedDataset out{std::move(records), GaussianProcess::prior(default_kernel_params(mle.family))};
    out.model = train_model(out.as_dataset(), mle, seed);
    return out;
}

double miso_acquisition_value(const GaussianProcess& agp, const SourceModelSet& models, std::size_t s,
                              const Eigen::VectorXd& x, double beta, double shift) {
    const auto p = agp.predict(x);
    const double numerator = -(p.mean - std::sqrt(beta) * std::sqrt(p.variance)) - shift;
    const double eta = std::abs(p.mean - models.models[s].predict(x).mean);
    return numerator / (models.costs[s] * (1.0 + eta));
}

double numerator_shift(const GaussianProcess& agp, double beta, std::size_t probes, std::uint64_t seed) {
    const std::size_t d = agp.data().empty() ? 1 : static_cast<std::size_t>(agp.data().X[0].size());
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& x : latin_hypercube(d, std::max<std::size_t>(probes, 1), seed))
        lowest = std::min(lowest, -lcb(agp, x, beta));
    return lowest;
}

std::size_t pick_source(const std::vector<std::optional<double>>& values, const std::vector<double>& costs) {
    std::optional<std::size_t> best;
    for (std::size_t s = 0; s < values.size(); ++s) {
        if (!values[s]) continue;
        if (!best || *values[s] > *values[*best] || (*values[s] == *values[*best] && costs[s] < costs[*best]))
            best = s;
    }
    if (!best) throw ProposalFailure("acquisition optimization failed on every source");
    return *best;
}

bool near_existing(const Dataset& data, const Eigen::VectorXd& x, double delta) {
    return std::any_of(data.X.begin(), data.X.end(),
                       [&](const Eigen::VectorXd& xi) { return squared_distance(x, xi) < delta; });
}

Eigen::VectorXd correction_point(const SourceModelSet& models, double delta, const InnerOptimizerConfig& inner,
                                 std::uint64_t seed) {
    const auto& g1 = models.models[0];
    const auto& d1 = models.datasets[0];
    if (d1.empty()) throw InvalidArgument("correction_point: source 1 has no evaluations");
    const std::size_t d = static_cast<std::size_t>(d1.X.front().size());
    const ScalarField sigma1 = [&](const Eigen::VectorXd& x) { return std::sqrt(g1.predict(x).variance); };
    auto optima = local_maxima(sigma1, d, inner, seed);
    std::stable_sort(optima.begin(), optima.end(), [](const auto& a, const auto& b) { return a.value > b.value; });
    for (auto& o : optima)
        if (!near_existing(d1, o.x, delta)) return std::move(o.x);
    throw ProposalFailure("no maximizer of sigma_1 lies at squared distance >= delta from the source-1 data");
}

MisoProposal propose(const GaussianProcess& agp, const SourceModelSet& models, double beta,
                     const MisoAcquisitionConfig& config, std::uint64_t seed) {
    models.validate();
    if (!(config.delta > 0.0)) throw InvalidArgument("propose: delta must be > 0");
    if (models.datasets[0].empty()) throw InvalidArgument("propose: source 1 has no evaluations");
    const std::size_t S = models.num_sources();
    const std::size_t d = static_cast<std::size_t>(models.datasets[0].X.front().size());
    const double shift = config.shift_numerator
                             ? numerator_shift(agp, beta, config.shift_probes, derive_seed(seed, {S}))
                             : 0.0;

    std::vector<std::optional<double>> values(S);
    std::vector<Eigen::VectorXd> locations(S);
    for (std::size_t s = 0; s < S; ++s) {
        const ScalarField f = [&, s](const Eigen::VectorXd& x) {
            return miso_acquisition_value(agp, models, s, x, beta, shift);
        };
        try {
            auto opt = optimize_acquisition(f, d, config.inner, derive_seed(seed, {s}));
            values[s] = opt.value;
            locations[s] = std::move(opt.x);
        } catch (const EvaluationError&) {
        } catch (const NumericalInstability&) {
        }
    }
    const std::size_t s = pick_source(values, models.costs);
    MisoProposal proposal{s, locations[s], *values[s], false, s, locations[s]};

    if (near_existing(models.datasets[s], proposal.x, config.delta)) {
        proposal.x = correction_point(models, config.delta, config.inner, derive_seed(seed, {S + 1}));
        proposal.source = 0;
        proposal.acquisition_value = miso_acquisition_value(agp, models, 0, proposal.x, beta, shift);
        proposal.corrected = true;
    }
    return proposal;
}

MisoProposal propose_on_candidates(const GaussianProcess& agp, const SourceModelSet& models, double beta,
                                   const std::vector<Eigen::VectorXd>& candidates, double shift) {
    models.validate();
    if (candidates.empty()) throw InvalidArgument("propose_on_candidates: no candidates");
    const std::size_t S = models.num_sources();
    std::vector<std::optional<double>> values(S);
    std::vector<std::size_t> where(S, 0);
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const double v = miso_acquisition_value(agp, models, s, candidates[i], beta, shift);
            if (!values[s] || v > *values[s]) {
                values[s] = v;
                where[s] = i;
            }
        }
    }
    const std::size_t s = pick_source(values, models.costs);
    return {s, candidates[where[s]], *values[s], false, s, candidates[where[s]]};
}

}  // namespace misoagp
