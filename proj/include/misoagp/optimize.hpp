#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Core>

namespace misoagp {

/// f(x) and, when `grad` is non-null, its gradient written into *grad.
/// Returning a non-finite value marks x as infeasible.
using ValueAndGradient = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct MinimizeOptions {
    std::size_t max_iterations = 200;
    double projected_gradient_tolerance = 1e-8;
    double relative_value_tolerance = 1e-14;
    double step_tolerance = 1e-12;
};

struct MinimizeResult {
    Eigen::VectorXd x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Projected BFGS on a box. Variables held at a bound by the gradient are
/// frozen for the step; the line search projects trial points back onto the
/// box and backtracks under an Armijo condition. Never returns a point
/// outside [lower, upper] and never returns a value worse than f(clamp(x0)).
MinimizeResult minimize_box(const ValueAndGradient& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                            const Eigen::VectorXd& upper, const MinimizeOptions& options = {});

/// Central differences, falling back to one-sided steps at the box faces.
Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                                           const Eigen::VectorXd& upper, double step);

}  // namespace misoagp
