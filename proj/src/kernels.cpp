#include "misoagp/kernels.hpp"

#include <cmath>

#include "misoagp/errors.hpp"

namespace misoagp {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSqrt5 = 2.23606797749979;

/// Partial derivative of k with respect to log l at scaled distance u = r/l.
double dk_dlog_length(const KernelParams& p, double u) {
    const double sf2 = p.signal_variance;
    switch (p.family) {
        case KernelFamily::se:
            return sf2 * u * u * std::exp(-0.5 * u * u);
        case KernelFamily::matern32:
            return 3.0 * sf2 * u * u * std::exp(-kSqrt3 * u);
        case KernelFamily::matern52:
            return (5.0 / 3.0) * sf2 * u * u * (1.0 + kSqrt5 * u) * std::exp(-kSqrt5 * u);
        case KernelFamily::rq: {
            const double base = 1.0 + u * u / (2.0 * p.rq_alpha);
            return sf2 * u * u * std::pow(base, -p.rq_alpha - 1.0);
        }
    }
    return 0.0;
}

double dk_dlog_alpha(const KernelParams& p, double u, double k) {
    const double t = u * u / (2.0 * p.rq_alpha);
    return p.rq_alpha * k * (t / (1.0 + t) - std::log1p(t));
}

}  // namespace

std::string_view to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::se: return "SE";
        case KernelFamily::matern32: return "Matern32";
        case KernelFamily::matern52: return "Matern52";
        case KernelFamily::rq: return "RQ";
    }
    return "?";
}

std::optional<KernelFamily> parse_kernel_family(std::string_view name) {
    if (name == "SE") return KernelFamily::se;
    if (name == "Matern32") return KernelFamily::matern32;
    if (name == "Matern52") return KernelFamily::matern52;
    if (name == "RQ") return KernelFamily::rq;
    return std::nullopt;
}

Eigen::VectorXd KernelParams::log_vector() const {
    Eigen::VectorXd theta(n_hyper());
    theta[0] = std::log(length_scale);
    theta[1] = std::log(signal_variance);
    if (family == KernelFamily::rq) theta[2] = std::log(rq_alpha);
    return theta;
}

KernelParams KernelParams::from_log(KernelFamily family, const Eigen::VectorXd& theta) {
    KernelParams p;
    p.family = family;
    if (static_cast<std::size_t>(theta.size()) < p.n_hyper())
        throw InvalidArgument("kernel log-parameter vector too short");
    p.length_scale = std::exp(theta[0]);
    p.signal_variance = std::exp(theta[1]);
    if (family == KernelFamily::rq) p.rq_alpha = std::exp(theta[2]);
    return p;
}

void KernelParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(length_scale)) throw InvalidArgument("kernel length_scale must be positive");
    if (!positive(signal_variance)) throw InvalidArgument("kernel signal_variance must be positive");
    if (family == KernelFamily::rq && !positive(rq_alpha))
        throw InvalidArgument("kernel rq_alpha must be positive");
}

double kernel_from_distance(const KernelParams& p, double r) {
    const double u = r / p.length_scale;
    const double sf2 = p.signal_variance;
    switch (p.family) {
        case KernelFamily::se:
            return sf2 * std::exp(-0.5 * u * u);
        case KernelFamily::matern32:
            return sf2 * (1.0 + kSqrt3 * u) * std::exp(-kSqrt3 * u);
        case KernelFamily::matern52:
            return sf2 * (1.0 + kSqrt5 * u + (5.0 / 3.0) * u * u) * std::exp(-kSqrt5 * u);
        case KernelFamily::rq:
            return sf2 * std::pow(1.0 + u * u / (2.0 * p.rq_alpha), -p.rq_alpha);
    }
    return 0.0;
}

double kernel_eval(const KernelParams& p, const Eigen::VectorXd& x, const Eigen::VectorXd& x2) {
    return kernel_from_distance(p, (x - x2).norm());
}

Eigen::MatrixXd kernel_matrix(const KernelParams& p, const PointList& X, const PointList& X2) {
    if (X.empty() || X2.empty()) throw InvalidArgument("kernel_matrix: empty point list");
    Eigen::MatrixXd K(X.size(), X2.size());
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = 0; j < X2.size(); ++j) K(i, j) = kernel_eval(p, X[i], X2[j]);
    return K;
}

Eigen::MatrixXd kernel_matrix(const KernelParams& p, const PointList& X) {
    if (X.empty()) throw InvalidArgument("kernel_matrix: empty point list");
    const auto n = static_cast<Eigen::Index>(X.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = p.signal_variance;
        for (Eigen::Index j = 0; j < i; ++j) K(i, j) = K(j, i) = kernel_eval(p, X[i], X[j]);
    }
    return K;
}

Eigen::VectorXd kernel_vector(const KernelParams& p, const Eigen::VectorXd& x, const PointList& X) {
    Eigen::VectorXd k(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) k[i] = kernel_eval(p, x, X[i]);
    return k;
}

std::vector<Eigen::MatrixXd> kernel_grad(const KernelParams& p, const PointList& X) {
    if (X.empty()) throw InvalidArgument("kernel_grad: empty point list");
    const auto n = static_cast<Eigen::Index>(X.size());
    std::vector<Eigen::MatrixXd> grads(p.n_hyper(), Eigen::MatrixXd::Zero(n, n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double u = (X[i] - X[j]).norm() / p.length_scale;
            const double k = i == j ? p.signal_variance : kernel_from_distance(p, u * p.length_scale);
            grads[0](i, j) = grads[0](j, i) = dk_dlog_length(p, u);
            grads[1](i, j) = grads[1](j, i) = k;
            if (p.family == KernelFamily::rq) grads[2](i, j) = grads[2](j, i) = dk_dlog_alpha(p, u, k);
        }
    }
    return grads;
}

}  // namespace misoagp
