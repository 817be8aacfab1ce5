#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "misoagp/acquisition.hpp"
#include "misoagp/gp.hpp"

namespace misoagp {

/// Per-source data, fitted surrogates and nominal costs. Index 0 is the
/// ground-truth (most expensive) source.
struct SourceModelSet {
    std::vector<Dataset> datasets;
    std::vector<GaussianProcess> models;
    std::vector<double> costs;

    std::size_t num_sources() const noexcept { return datasets.size(); }
    /// Throws InvalidArgument if the three vectors disagree or a cost is not positive.
    void validate() const;
};

/// |mu(x) - mu'(x)| in objective units.
double discrepancy(const GaussianProcess& g, const GaussianProcess& g2, const Eigen::VectorXd& x);

enum class SelectionReason { from_d1, reliable };

struct AugmentedRecord {
    Eigen::VectorXd x;
    double y = 0.0;
    std::size_t origin_source = 0;  // 0-based
    std::size_t record_index = 0;   // position inside the origin dataset
    SelectionReason reason = SelectionReason::from_d1;
};

/// True when a record at x from source z passes the reliability test
/// discrepancy(G_1, G_z, x) < m * sigma_1(x) (strict).
bool is_reliable(const SourceModelSet& models, std::size_t z, const Eigen::VectorXd& x, double m);

/// Records of sources 2..S whose own location passes is_reliable.
std::vector<AugmentedRecord> select_reliable(const SourceModelSet& models, double m);

struct AugmentedDataset {
    std::vector<AugmentedRecord> records;
    GaussianProcess model;

    std::size_t size() const noexcept { return records.size(); }
    Dataset as_dataset() const;
    /// Minimum y over the records. Throws UndefinedIncumbent when empty.
    const AugmentedRecord& incumbent() const;
};

/// D1 followed by the reliable records, with cheap duplicates of a D1
/// location (and repeated (location, source) pairs) dropped.
std::vector<AugmentedRecord> merge_augmented(const SourceModelSet& models, std::vector<AugmentedRecord> reliable);

/// Selects, merges and trains the augmented GP. When nothing beyond D1 is
/// selected the ground-truth model is reused as is, since the training
/// problem is identical. Throws EmptyAugmentedSet if D1 is empty and nothing
/// passes selection.
AugmentedDataset build_agp(const SourceModelSet& models, double m, const MleConfig& mle, std::uint64_t seed);

struct MisoAcquisitionConfig {
    double m = 1.0;
    /// Squared unit-cube distance below which a proposal counts as a repeat.
    double delta = 1e-4;
    /// Subtract the minimum of -LCB over probe points so the numerator is >= 0.
    bool shift_numerator = false;
    std::size_t shift_probes = 1024;
    InnerOptimizerConfig inner;
};

/// -(mu_hat(x) - sqrt(beta) sigma_hat(x)) / (c_s (1 + discrepancy(agp, G_s, x))) - no shift applied.
double miso_acquisition_value(const GaussianProcess& agp, const SourceModelSet& models, std::size_t s,
                              const Eigen::VectorXd& x, double beta, double numerator_shift = 0.0);

/// Minimum of -LCB of the AGP over a Latin-hypercube probe set.
double numerator_shift(const GaussianProcess& agp, double beta, std::size_t probes, std::uint64_t seed);

struct MisoProposal {
    std::size_t source = 0;  // 0-based
    Eigen::VectorXd x;
    double acquisition_value = 0.0;
    bool corrected = false;
    /// The uncorrected argmax; equal to (source, x) unless corrected.
    std::size_t argmax_source = 0;
    Eigen::VectorXd argmax_x;
};

/// Cross-source argmax: highest value wins, then the cheaper source, then the lower index.
std::size_t pick_source(const std::vector<std::optional<double>>& values, const std::vector<double>& costs);

/// Maximizes the cost-aware acquisition per source over the unit cube, takes
/// the best (source, location) pair, then applies the repeat-query correction:
/// if the location is within sqrt(delta) of a record of the chosen source,
/// switch to source 1 at the maximizer of sigma_1. Throws ProposalFailure if
/// every per-source optimization fails or no sigma_1 maximizer clears delta.
MisoProposal propose(const GaussianProcess& agp, const SourceModelSet& models, double beta,
                     const MisoAcquisitionConfig& config, std::uint64_t seed);

/// Same decision rule over a finite candidate set (no correction).
MisoProposal propose_on_candidates(const GaussianProcess& agp, const SourceModelSet& models, double beta,
                                   const std::vector<Eigen::VectorXd>& candidates, double shift = 0.0);

/// Whether `x` lies within squared distance `delta` of any point in `data`.
bool near_existing(const Dataset& data, const Eigen::VectorXd& x, double delta);

/// Repeat-query correction target: the best local maximizer of sigma_1 that is
/// at squared distance >= delta from every D1 point.
Eigen::VectorXd correction_point(const SourceModelSet& models, double delta, const InnerOptimizerConfig& inner,
                                 std::uint64_t seed);

}  // namespace misoagp
