#include "misoagp/acquisition.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "misoagp/errors.hpp"
#include "misoagp/spaces.hpp"

namespace misoagp {

double beta(const BetaSchedule& schedule, std::size_t n) {
    if (n < 1) throw InvalidArgument("beta: n must be >= 1");
    if (schedule.mode == BetaSchedule::Mode::constant) return schedule.constant_value;
    const double d = static_cast<double>(schedule.dim);
    const double nn = static_cast<double>(n);
    return 2.0 * std::log(d * nn * nn * std::numbers::pi * std::numbers::pi / (6.0 * schedule.delta_conf));
}

double lcb(const GaussianProcess& gp, const Eigen::VectorXd& x, double beta) {
    const auto p = gp.predict(x);
    return p.mean - std::sqrt(beta) * std::sqrt(p.variance);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double probability_of_improvement(double mean, double sigma, double f_best, double xi) {
    if (sigma <= 0.0) return mean < f_best - xi ? 1.0 : 0.0;
    return normal_cdf((f_best - mean - xi) / sigma);
}

double probability_of_improvement(const GaussianProcess& gp, const Eigen::VectorXd& x, double f_best, double xi) {
    const auto p = gp.predict(x);
    return probability_of_improvement(p.mean, std::sqrt(p.variance), f_best, xi);
}

double expected_improvement(double mean, double sigma, double f_best, double xi) {
    if (sigma <= 0.0) return 0.0;
    const double improvement = f_best - mean - xi;
    const double z = improvement / sigma;
    return std::max(0.0, improvement * normal_cdf(z) + sigma * normal_pdf(z));
}

double expected_improvement(const GaussianProcess& gp, const Eigen::VectorXd& x, double f_best, double xi) {
    const auto p = gp.predict(x);
    return expected_improvement(p.mean, std::sqrt(p.variance), f_best, xi);
}

std::vector<AcquisitionOptimum> local_maxima(const ScalarField& objective, std::size_t d,
                                             const InnerOptimizerConfig& config, std::uint64_t seed) {
    if (d == 0) throw InvalidArgument("optimize_acquisition: d must be >= 1");
    const std::size_t n_starts = config.starts_for(d);
    if (n_starts == 0) throw InvalidArgument("optimize_acquisition: n_starts must be >= 1");

    const Eigen::VectorXd lower = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    const Eigen::VectorXd upper = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d));

    auto checked = [&](const Eigen::VectorXd& x) {
        const double v = objective(x);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "acquisition objective returned " << v << " at (" << x.transpose() << ")";
            throw EvaluationError(msg.str(), x);
        }
        return v;
    };
    // minimize the negated objective
    const ValueAndGradient negated = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
        const double v = checked(x);
        if (grad)
            *grad = -finite_difference_gradient(checked, x, lower, upper, config.fd_step);
        return -v;
    };

    std::vector<AcquisitionOptimum> out;
    out.reserve(n_starts);
    for (const auto& start : latin_hypercube(d, n_starts, seed, LhsMode::jittered)) {
        const auto r = minimize_box(negated, start, lower, upper, config.local);
        out.push_back({r.x, -r.value});
    }
    return out;
}

AcquisitionOptimum optimize_acquisition(const ScalarField& objective, std::size_t d,
                                        const InnerOptimizerConfig& config, std::uint64_t seed) {
    auto all = local_maxima(objective, d, config, seed);
    std::size_t best = 0;
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i].value > all[best].value) best = i;
    return std::move(all[best]);
}

}  // namespace misoagp
