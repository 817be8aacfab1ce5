#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "misoagp/gp.hpp"
#include "misoagp/optimize.hpp"

namespace misoagp {

/// Exploration weight beta(n) used by the confidence-bound acquisitions.
struct BetaSchedule {
    enum class Mode { srinivas_practical, constant };
    Mode mode = Mode::srinivas_practical;
    double delta_conf = 0.05;
    double constant_value = 4.0;
    std::size_t dim = 1;
};

/// srinivas_practical: 2 log(d n^2 pi^2 / (6 delta_conf)); constant: the
/// configured value. n >= 1.
double beta(const BetaSchedule& schedule, std::size_t n);

/// mu(x) - sqrt(beta) sigma(x), objective units.
double lcb(const GaussianProcess& gp, const Eigen::VectorXd& x, double beta);

double normal_cdf(double z);
double normal_pdf(double z);

/// Phi((f_best - mu - xi) / sigma); sigma = 0 gives the indicator mu < f_best - xi.
double probability_of_improvement(double mean, double sigma, double f_best, double xi);
double probability_of_improvement(const GaussianProcess& gp, const Eigen::VectorXd& x, double f_best, double xi);

/// (f_best - mu - xi) Phi(Z) + sigma phi(Z); exactly 0 when sigma = 0.
double expected_improvement(double mean, double sigma, double f_best, double xi);
double expected_improvement(const GaussianProcess& gp, const Eigen::VectorXd& x, double f_best, double xi);

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

struct InnerOptimizerConfig {
    /// 0 means 10 * d.
    std::size_t n_starts = 0;
    double fd_step = 1e-7;
    MinimizeOptions local{100, 1e-9, 1e-15, 1e-12};

    std::size_t starts_for(std::size_t d) const noexcept { return n_starts ? n_starts : 10 * d; }
};

struct AcquisitionOptimum {
    Eigen::VectorXd x;
    double value = 0.0;
};

/// Every local maximum reached from the Latin-hypercube starts, in start order.
/// Throws EvaluationError if the objective is non-finite at a visited point.
std::vector<AcquisitionOptimum> local_maxima(const ScalarField& objective, std::size_t d,
                                             const InnerOptimizerConfig& config, std::uint64_t seed);

/// Best of local_maxima; the lowest start index wins ties.
AcquisitionOptimum optimize_acquisition(const ScalarField& objective, std::size_t d,
                                        const InnerOptimizerConfig& config, std::uint64_t seed);

}  // namespace misoagp
