#pragma once

// Reference implementations shared by the unit and acceptance tests. They are
// written the slow, obvious way (dense inverses, determinants, loops) so they
// share no code path with the library they check.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "misoagp/gp.hpp"
#include "misoagp/kernels.hpp"

namespace testing_support {

using misoagp::KernelFamily;
using misoagp::KernelParams;
using misoagp::PointList;

inline double kernel_ref(const KernelParams& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double r = (a - b).norm();
    const double u = r / p.length_scale;
    switch (p.family) {
        case KernelFamily::se:
            return p.signal_variance * std::exp(-0.5 * u * u);
        case KernelFamily::matern32:
            return p.signal_variance * (1.0 + std::sqrt(3.0) * u) * std::exp(-std::sqrt(3.0) * u);
        case KernelFamily::matern52:
            return p.signal_variance * (1.0 + std::sqrt(5.0) * u + 5.0 * u * u / 3.0) * std::exp(-std::sqrt(5.0) * u);
        case KernelFamily::rq:
            return p.signal_variance * std::pow(1.0 + u * u / (2.0 * p.rq_alpha), -p.rq_alpha);
    }
    return 0.0;
}

inline Eigen::MatrixXd gram_ref(const KernelParams& p, const PointList& X) {
    const auto n = static_cast<Eigen::Index>(X.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) K(i, j) = kernel_ref(p, X[i], X[j]);
    return K;
}

/// Standardization used by the library: population mean / std, scale 1 for
/// (near) constant targets.
struct Standardized {
    Eigen::VectorXd y;
    double mean = 0.0;
    double scale = 1.0;
};

inline Standardized standardize(const std::vector<double>& y) {
    Standardized s;
    const auto n = static_cast<double>(y.size());
    for (double v : y) s.mean += v;
    s.mean /= n;
    double var = 0.0;
    for (double v : y) var += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(var / n);
    s.scale = sd > 1e-12 * std::max(1.0, std::abs(s.mean)) ? sd : 1.0;
    s.y.resize(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) s.y(static_cast<Eigen::Index>(i)) = (y[i] - s.mean) / s.scale;
    return s;
}

/// Dense direct-inversion posterior in standardized units.
struct DensePosterior {
    Eigen::MatrixXd Kinv;
    Eigen::VectorXd y;
    KernelParams params;
    PointList X;

    DensePosterior(const misoagp::Dataset& data, const KernelParams& p, double noise) : params(p), X(data.X) {
        const Eigen::MatrixXd K =
            gram_ref(p, data.X) + noise * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(data.size()),
                                                                    static_cast<Eigen::Index>(data.size()));
        Kinv = K.inverse();
        y = standardize(data.y).y;
    }

    Eigen::VectorXd kvec(const Eigen::VectorXd& x) const {
        Eigen::VectorXd k(static_cast<Eigen::Index>(X.size()));
        for (std::size_t i = 0; i < X.size(); ++i) k(static_cast<Eigen::Index>(i)) = kernel_ref(params, x, X[i]);
        return k;
    }
    double mean(const Eigen::VectorXd& x) const { return kvec(x).dot(Kinv * y); }
    double variance(const Eigen::VectorXd& x) const {
        const Eigen::VectorXd k = kvec(x);
        return kernel_ref(params, x, x) - k.dot(Kinv * k);
    }
    double lml() const {
        const auto n = static_cast<double>(y.size());
        const double logdet = std::log(Kinv.inverse().determinant());
        return -0.5 * y.dot(Kinv * y) - 0.5 * logdet - 0.5 * n * std::log(2.0 * M_PI);
    }
};

inline Eigen::VectorXd uniform_point(std::mt19937_64& rng, std::size_t d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd x(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) x(static_cast<Eigen::Index>(i)) = u(rng);
    return x;
}

/// Points drawn so that no two are closer than `min_gap`, keeping the
/// noise-free Gram matrix comfortably invertible.
inline PointList spread_points(std::mt19937_64& rng, std::size_t n, std::size_t d, double min_gap) {
    PointList X;
    for (int attempts = 0; X.size() < n; ++attempts) {
        if (attempts > 100000) throw std::runtime_error("spread_points: gap too large for n points");
        auto x = uniform_point(rng, d);
        bool ok = true;
        for (const auto& other : X) ok = ok && (x - other).norm() >= min_gap;
        if (ok) X.push_back(std::move(x));
    }
    return X;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("misoagp_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1e-8, std::abs(a), std::abs(b)}); }

/// Spectral condition number of a symmetric positive definite matrix.
inline double condition_number(const Eigen::MatrixXd& K) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

}  // namespace testing_support
