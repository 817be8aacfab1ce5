#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "misoagp/kernels.hpp"

namespace misoagp {

/// Training data: locations in the unit cube and objective values.
struct Dataset {
    PointList X;
    std::vector<double> y;

    std::size_t size() const noexcept { return X.size(); }
    bool empty() const noexcept { return X.empty(); }
    void add(Eigen::VectorXd x, double value) {
        X.push_back(std::move(x));
        y.push_back(value);
    }
    /// Throws InvalidArgument on size mismatch or non-finite entries.
    void validate() const;
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// A GP conditioned on a dataset. Outputs are standardized internally to zero
/// mean and unit variance, so the zero-mean prior holds for any objective;
/// `noise` is therefore expressed in standardized units. Immutable once built.
class GaussianProcess {
public:
    /// The unconditioned prior (n = 0): mean 0, variance signal_variance.
    static GaussianProcess prior(const KernelParams& params);

    /// Conditions on `data` (n >= 1). If the Cholesky factorization of
    /// K + noise*I fails the diagonal is inflated (at least 1e-10, x10 per
    /// retry, six retries) before IllConditionedKernel is thrown.
    static GaussianProcess fit(Dataset data, const KernelParams& params, double noise);

    /// Posterior mean and variance in objective units.
    Prediction predict(const Eigen::VectorXd& x) const;
    /// Posterior mean and variance in standardized units.
    Prediction predict_standardized(const Eigen::VectorXd& x) const;

    /// Standardized mean via the weight form sum_i alpha_i k(x, x_i).
    double weighted_mean_standardized(const Eigen::VectorXd& x) const;

    double log_marginal_likelihood() const;
    /// Gradient of the LML w.r.t. (log l, log sf2[, log alpha][, log noise]).
    Eigen::VectorXd lml_gradient(bool include_noise) const;

    std::size_t size() const noexcept { return data_.size(); }
    const Dataset& data() const noexcept { return data_; }
    const KernelParams& params() const noexcept { return params_; }
    /// Noise requested by the caller.
    double noise() const noexcept { return noise_; }
    /// Diagonal term actually factorized (noise or the escalated jitter).
    double effective_noise() const noexcept { return effective_noise_; }
    bool jittered() const noexcept { return effective_noise_ != noise_; }
    const Eigen::MatrixXd& cholesky_factor() const noexcept { return chol_; }
    const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
    const Eigen::VectorXd& standardized_targets() const noexcept { return y_std_vec_; }
    double y_mean() const noexcept { return y_mean_; }
    double y_scale() const noexcept { return y_scale_; }

private:
    GaussianProcess() = default;

    KernelParams params_;
    double noise_ = 0.0;
    double effective_noise_ = 0.0;
    Dataset data_;
    Eigen::MatrixXd chol_;  // lower triangular
    Eigen::VectorXd alpha_;
    Eigen::VectorXd y_std_vec_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
};

enum class NoiseMode { fixed, fitted };

struct NoiseConfig {
    NoiseMode mode = NoiseMode::fitted;
    /// Used as-is in fixed mode.
    double value = 0.0;
    /// Box for fitted mode, standardized units.
    double lower = 1e-8;
    double upper = 1.0;
};

struct MleConfig {
    KernelFamily family = KernelFamily::se;
    NoiseConfig noise;
    std::size_t restarts = 10;
    KernelBounds bounds;
    std::size_t max_iterations = 200;
};

/// Multi-start maximum-likelihood training. Starting points are a Latin
/// hypercube over the log-parameter box; each start runs a bounded
/// quasi-Newton ascent. Returns the restart with the highest LML (ties to the
/// lower restart index). Requires n >= 2.
GaussianProcess mle_train(const Dataset& data, const MleConfig& config, std::uint64_t seed);

/// Prior for n = 0, fixed default hyperparameters for n = 1, mle_train otherwise.
GaussianProcess train_model(const Dataset& data, const MleConfig& config, std::uint64_t seed);

/// Default hyperparameters used whenever the data cannot support MLE.
KernelParams default_kernel_params(KernelFamily family);

}  // namespace misoagp
