#include "misoagp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "misoagp/errors.hpp"
#include "misoagp/optimize.hpp"
#include "misoagp/spaces.hpp"

namespace misoagp {

namespace {

constexpr double kMinJitter = 1e-10;
constexpr int kJitterRetries = 6;
constexpr double kVarianceTolerance = 1e-10;

}  // namespace

void Dataset::validate() const {
    if (X.size() != y.size()) throw InvalidArgument("dataset: |X| != |y|");
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (!X[i].allFinite() || !std::isfinite(y[i]))
            throw InvalidArgument("dataset: non-finite entry at record " + std::to_string(i));
        if (i > 0 && X[i].size() != X[0].size()) throw InvalidArgument("dataset: inconsistent dimensions");
    }
}

GaussianProcess GaussianProcess::prior(const KernelParams& params) {
    params.validate();
    GaussianProcess gp;
    gp.params_ = params;
    return gp;
}

GaussianProcess GaussianProcess::fit(Dataset data, const KernelParams& params, double noise) {
    params.validate();
    data.validate();
    if (data.empty()) throw InvalidArgument("fit: dataset is empty");
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw InvalidArgument("fit: noise must be >= 0");

    GaussianProcess gp;
    gp.params_ = params;
    gp.noise_ = noise;

    const auto n = static_cast<Eigen::Index>(data.size());
    Eigen::Map<const Eigen::VectorXd> y(data.y.data(), n);
    gp.y_mean_ = y.mean();
    const double sd = std::sqrt((y.array() - gp.y_mean_).square().mean());
    gp.y_scale_ = sd > 1e-12 * std::max(1.0, std::abs(gp.y_mean_)) ? sd : 1.0;
    gp.y_std_vec_ = (y.array() - gp.y_mean_) / gp.y_scale_;

    const Eigen::MatrixXd K = kernel_matrix(params, data.X);
    double diag = noise;
    for (int attempt = 0; attempt <= kJitterRetries; ++attempt) {
        if (attempt == 1)
            diag = noise < kMinJitter ? kMinJitter : 10.0 * noise;
        else if (attempt > 1)
            diag *= 10.0;
        Eigen::LLT<Eigen::MatrixXd> llt(K + diag * Eigen::MatrixXd::Identity(n, n));
        if (llt.info() != Eigen::Success) continue;
        Eigen::MatrixXd L = llt.matrixL();
        if (!L.allFinite() || (L.diagonal().array() <= 0.0).any()) continue;
        gp.chol_ = std::move(L);
        gp.alpha_ = llt.solve(gp.y_std_vec_);
        gp.effective_noise_ = diag;
        gp.data_ = std::move(data);
        return gp;
    }
    throw IllConditionedKernel("Cholesky factorization of K + noise*I failed after jitter escalation to " +
                               std::to_string(diag));
}

Prediction GaussianProcess::predict_standardized(const Eigen::VectorXd& x) const {
    const double prior_var = params_.signal_variance;
    if (data_.empty()) return {0.0, prior_var};
    const Eigen::VectorXd k = kernel_vector(params_, x, data_.X);
    const double mean = k.dot(alpha_);
    const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k);
    double var = prior_var - v.squaredNorm();
    const double tolerance = kVarianceTolerance * std::max(1.0, prior_var);
    if (var < -tolerance) {
        std::ostringstream msg;
        msg << "negative posterior variance " << var << " (prior variance " << prior_var << ")";
        throw NumericalInstability(msg.str());
    }
    // Round-off sized values either way are zero, so a noise-free training
    // point reports exactly zero uncertainty.
    if (var < tolerance) var = 0.0;
    return {mean, var};
}

Prediction GaussianProcess::predict(const Eigen::VectorXd& x) const {
    const auto p = predict_standardized(x);
    return {y_mean_ + y_scale_ * p.mean, y_scale_ * y_scale_ * p.variance};
}

double GaussianProcess::weighted_mean_standardized(const Eigen::VectorXd& x) const {
    double mu = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) mu += alpha_[i] * kernel_eval(params_, x, data_.X[i]);
    return mu;
}

double GaussianProcess::log_marginal_likelihood() const {
    if (data_.empty()) throw InvalidArgument("log_marginal_likelihood: no data");
    const double n = static_cast<double>(data_.size());
    return -0.5 * y_std_vec_.dot(alpha_) - chol_.diagonal().array().log().sum() -
           0.5 * n * std::log(2.0 * std::numbers::pi);
}

Eigen::VectorXd GaussianProcess::lml_gradient(bool include_noise) const {
    if (data_.empty()) throw InvalidArgument("lml_gradient: no data");
    const auto n = static_cast<Eigen::Index>(data_.size());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const auto Lv = chol_.triangularView<Eigen::Lower>();
    const Eigen::MatrixXd Kinv = Lv.transpose().solve(Lv.solve(I));
    const Eigen::MatrixXd W = alpha_ * alpha_.transpose() - Kinv;

    const auto dK = kernel_grad(params_, data_.X);
    Eigen::VectorXd grad(dK.size() + (include_noise ? 1 : 0));
    for (std::size_t j = 0; j < dK.size(); ++j) grad[j] = 0.5 * (W.array() * dK[j].array()).sum();
    if (include_noise) grad[dK.size()] = 0.5 * effective_noise_ * W.trace();
    return grad;
}

KernelParams default_kernel_params(KernelFamily family) {
    KernelParams p;
    p.family = family;
    p.length_scale = 0.5;
    p.signal_variance = 1.0;
    p.rq_alpha = 1.0;
    return p;
}

GaussianProcess mle_train(const Dataset& data, const MleConfig& config, std::uint64_t seed) {
    if (data.size() < 2) throw InvalidArgument("mle_train: needs at least two records");
    if (config.restarts < 1) throw InvalidArgument("mle_train: restarts must be >= 1");
    data.validate();

    const bool fit_noise = config.noise.mode == NoiseMode::fitted;
    const KernelFamily family = config.family;
    const std::size_t nk = family == KernelFamily::rq ? 3 : 2;
    const std::size_t p = nk + (fit_noise ? 1 : 0);

    Eigen::VectorXd lower(p), upper(p);
    const auto& b = config.bounds;
    lower[0] = b.log_length_lower;
    upper[0] = b.log_length_upper;
    lower[1] = b.log_signal_lower;
    upper[1] = b.log_signal_upper;
    if (family == KernelFamily::rq) {
        lower[2] = b.log_alpha_lower;
        upper[2] = b.log_alpha_upper;
    }
    if (fit_noise) {
        lower[nk] = std::log(config.noise.lower);
        upper[nk] = std::log(config.noise.upper);
    }

    auto build = [&](const Eigen::VectorXd& theta) {
        const KernelParams kp = KernelParams::from_log(family, theta.head(nk));
        const double noise = fit_noise ? std::exp(theta[nk]) : config.noise.value;
        return GaussianProcess::fit(data, kp, noise);
    };

    const ValueAndGradient objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
        try {
            const auto gp = build(theta);
            if (grad) *grad = -gp.lml_gradient(fit_noise);
            return -gp.log_marginal_likelihood();
        } catch (const IllConditionedKernel&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    MinimizeOptions opts;
    opts.max_iterations = config.max_iterations;
    opts.projected_gradient_tolerance = 1e-7;

    const auto starts = latin_hypercube(p, config.restarts, seed, LhsMode::jittered);
    std::optional<Eigen::VectorXd> best_theta;
    double best_value = std::numeric_limits<double>::infinity();
    for (const auto& u : starts) {
        const Eigen::VectorXd theta0 = lower.array() + u.array() * (upper - lower).array();
        const auto r = minimize_box(objective, theta0, lower, upper, opts);
        if (std::isfinite(r.value) && r.value < best_value) {
            best_value = r.value;
            best_theta = r.x;
        }
    }
    if (!best_theta) throw IllConditionedKernel("mle_train: every restart failed to factorize");
    return build(*best_theta);
}

GaussianProcess train_model(const Dataset& data, const MleConfig& config, std::uint64_t seed) {
    const auto defaults = default_kernel_params(config.family);
    if (data.empty()) return GaussianProcess::prior(defaults);
    if (data.size() == 1) {
        const double noise = config.noise.mode == NoiseMode::fitted ? config.noise.lower : config.noise.value;
        return GaussianProcess::fit(data, defaults, noise);
    }
    return mle_train(data, config, seed);
}

}  // namespace misoagp
