#include "misoagp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "misoagp/errors.hpp"

namespace misoagp {

namespace {

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    return x.cwiseMax(lower).cwiseMin(upper);
}

/// Components pinned at a bound with the gradient pushing outward.
Eigen::Array<bool, Eigen::Dynamic, 1> active_set(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                                 const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    Eigen::Array<bool, Eigen::Dynamic, 1> active(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        active[i] = (x[i] <= lower[i] && g[i] > 0.0) || (x[i] >= upper[i] && g[i] < 0.0);
    return active;
}

}  // namespace

MinimizeResult minimize_box(const ValueAndGradient& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                            const Eigen::VectorXd& upper, const MinimizeOptions& options) {
    const Eigen::Index n = x0.size();
    if (lower.size() != n || upper.size() != n) throw InvalidArgument("minimize_box: bound size mismatch");

    MinimizeResult res;
    res.x = project(x0, lower, upper);
    Eigen::VectorXd g(n);
    res.value = f(res.x, &g);
    if (!std::isfinite(res.value) || !g.allFinite()) return res;

    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    bool scaled = false;

    for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
        const auto active = active_set(res.x, g, lower, upper);
        Eigen::VectorXd pg = g;
        for (Eigen::Index i = 0; i < n; ++i)
            if (active[i]) pg[i] = 0.0;
        if (pg.lpNorm<Eigen::Infinity>() <= options.projected_gradient_tolerance) {
            res.converged = true;
            break;
        }

        Eigen::MatrixXd Hf = H;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!active[i]) continue;
            Hf.row(i).setZero();
            Hf.col(i).setZero();
        }
        Eigen::VectorXd dir = -(Hf * pg);
        if (!(dir.dot(pg) < 0.0)) {
            H.setIdentity();
            scaled = false;
            dir = -pg;
        }
        if (!scaled) {
            // first step of a fresh metric: cap the move at a tenth of the box
            const double span = (upper - lower).maxCoeff();
            const double norm = dir.lpNorm<Eigen::Infinity>();
            if (norm > 0.0 && std::isfinite(span)) dir *= std::min(1.0, 0.1 * span / norm);
        }

        double t = 1.0;
        Eigen::VectorXd x_new, g_new(n);
        double f_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int backtrack = 0; backtrack < 60; ++backtrack) {
            x_new = project(res.x + t * dir, lower, upper);
            const Eigen::VectorXd step = x_new - res.x;
            if (step.lpNorm<Eigen::Infinity>() <= options.step_tolerance) break;
            f_new = f(x_new, &g_new);
            if (std::isfinite(f_new) && g_new.allFinite() && f_new <= res.value + 1e-4 * g.dot(step)) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (scaled) {
                H.setIdentity();
                scaled = false;
                continue;
            }
            res.converged = true;  // no descent available along the projected gradient
            break;
        }

        const Eigen::VectorXd s = x_new - res.x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        const double f_old = res.value;
        res.x = x_new;
        res.value = f_new;
        g = g_new;

        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                H = Eigen::MatrixXd::Identity(n, n) * (sy / y.squaredNorm());
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
        }

        if (std::abs(f_old - f_new) <= options.relative_value_tolerance * std::max(1.0, std::abs(f_old)) &&
            s.lpNorm<Eigen::Infinity>() <= 1e3 * options.step_tolerance) {
            res.converged = true;
            ++res.iterations;
            break;
        }
    }
    return res;
}

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                                           const Eigen::VectorXd& upper, double step) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double hi = std::min(x[i] + step, upper[i]);
        const double lo = std::max(x[i] - step, lower[i]);
        probe[i] = hi;
        const double fh = f(probe);
        probe[i] = lo;
        const double fl = f(probe);
        probe[i] = x[i];
        g[i] = hi > lo ? (fh - fl) / (hi - lo) : 0.0;
    }
    return g;
}

}  // namespace misoagp
