#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace misoagp {

enum class KernelFamily { se, matern32, matern52, rq };

std::string_view to_string(KernelFamily family);
std::optional<KernelFamily> parse_kernel_family(std::string_view name);

/// Isotropic stationary covariance hyperparameters. `length_scale` is in
/// unit-cube distance units; `rq_alpha` is ignored unless family is rq.
struct KernelParams {
    KernelFamily family = KernelFamily::se;
    double length_scale = 0.5;
    double signal_variance = 1.0;
    double rq_alpha = 1.0;

    /// Number of log-hyperparameters: (log l, log sf2[, log alpha]).
    std::size_t n_hyper() const noexcept { return family == KernelFamily::rq ? 3 : 2; }
    Eigen::VectorXd log_vector() const;
    static KernelParams from_log(KernelFamily family, const Eigen::VectorXd& theta);
    /// Throws InvalidArgument unless every parameter is positive and finite.
    void validate() const;
};

/// Box for the log-hyperparameters searched by maximum likelihood.
struct KernelBounds {
    double log_length_lower = -6.907755278982137;   // log 1e-3
    double log_length_upper = 2.302585092994046;    // log 10
    double log_signal_lower = -9.210340371976182;   // log 1e-4
    double log_signal_upper = 6.907755278982137;    // log 1e3
    double log_alpha_lower = -4.605170185988091;    // log 1e-2
    double log_alpha_upper = 4.605170185988091;     // log 1e2
};

using PointList = std::vector<Eigen::VectorXd>;

/// Covariance as a function of Euclidean distance r.
double kernel_from_distance(const KernelParams& p, double r);

double kernel_eval(const KernelParams& p, const Eigen::VectorXd& x, const Eigen::VectorXd& x2);

/// K[i][j] = k(X[i], X2[j]). Throws InvalidArgument on empty input.
Eigen::MatrixXd kernel_matrix(const KernelParams& p, const PointList& X, const PointList& X2);
Eigen::MatrixXd kernel_matrix(const KernelParams& p, const PointList& X);

/// Row vector k(x, X) as a column.
Eigen::VectorXd kernel_vector(const KernelParams& p, const Eigen::VectorXd& x, const PointList& X);

/// dK/dtheta for theta = (log l, log sf2[, log alpha]).
std::vector<Eigen::MatrixXd> kernel_grad(const KernelParams& p, const PointList& X);

}  // namespace misoagp
