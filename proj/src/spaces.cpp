#include "misoagp/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "misoagp/errors.hpp"

namespace misoagp {

namespace {

double forward(const Dimension& dim, double v) { return dim.log10_scaled ? std::log10(v) : v; }
double inverse(const Dimension& dim, double v) { return dim.log10_scaled ? std::pow(10.0, v) : v; }

}  // namespace

SearchSpace::SearchSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw InvalidArgument("search space needs at least one dimension");
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        const auto& d = dims_[i];
        if (!std::isfinite(d.lower) || !std::isfinite(d.upper) || !(d.lower < d.upper))
            throw InvalidArgument("dimension '" + d.name + "': lower must be < upper");
        if (d.log10_scaled && !(d.lower > 0.0))
            throw InvalidArgument("dimension '" + d.name + "': log-scaled bounds must be positive");
    }
}

SearchSpace SearchSpace::unit_cube(std::size_t d) {
    std::vector<Dimension> dims(d);
    for (std::size_t i = 0; i < d; ++i) dims[i].name = "x" + std::to_string(i + 1);
    return SearchSpace(std::move(dims));
}

bool SearchSpace::contains(const RawPoint& x) const {
    if (static_cast<std::size_t>(x.size()) != dims_.size()) return false;
    for (std::size_t i = 0; i < dims_.size(); ++i)
        if (!(x[i] >= dims_[i].lower && x[i] <= dims_[i].upper)) return false;
    return true;
}

UnitPoint SearchSpace::to_internal(const RawPoint& x) const {
    if (static_cast<std::size_t>(x.size()) != dims_.size())
        throw InvalidArgument("point has " + std::to_string(x.size()) + " coordinates, space has " +
                              std::to_string(dims_.size()));
    UnitPoint u(x.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        const auto& d = dims_[i];
        if (!(x[i] >= d.lower && x[i] <= d.upper))
            throw BoundsError(i, "coordinate " + std::to_string(x[i]) + " outside bounds of dimension '" +
                                     d.name + "'");
        const double lo = forward(d, d.lower);
        const double hi = forward(d, d.upper);
        u[i] = std::clamp((forward(d, x[i]) - lo) / (hi - lo), 0.0, 1.0);
    }
    return u;
}

RawPoint SearchSpace::from_internal(const UnitPoint& u) const {
    if (static_cast<std::size_t>(u.size()) != dims_.size())
        throw InvalidArgument("unit point dimension mismatch");
    RawPoint x(u.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        const auto& d = dims_[i];
        if (!(u[i] >= 0.0 && u[i] <= 1.0)) throw BoundsError(i, "unit coordinate outside [0,1]");
        const double lo = forward(d, d.lower);
        const double hi = forward(d, d.upper);
        // endpoints exact so that bounds survive the round trip
        if (u[i] == 0.0)
            x[i] = d.lower;
        else if (u[i] == 1.0)
            x[i] = d.upper;
        else
            x[i] = std::clamp(inverse(d, lo + u[i] * (hi - lo)), d.lower, d.upper);
    }
    return x;
}

std::vector<UnitPoint> latin_hypercube(std::size_t d, std::size_t n, std::uint64_t seed, LhsMode mode) {
    if (n == 0) throw InvalidArgument("latin_hypercube: n must be >= 1");
    if (d == 0) throw InvalidArgument("latin_hypercube: d must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    std::vector<UnitPoint> points(n, UnitPoint(d));
    std::vector<std::size_t> strata(n);
    const double width = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        std::shuffle(strata.begin(), strata.end(), rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double offset = mode == LhsMode::centered ? 0.5 : jitter(rng);
            // stay strictly inside the half-open stratum
            points[i][j] = std::min((static_cast<double>(strata[i]) + offset) * width,
                                    std::nextafter((static_cast<double>(strata[i]) + 1.0) * width, 0.0));
        }
    }
    return points;
}

double squared_distance(const UnitPoint& a, const UnitPoint& b) { return (a - b).squaredNorm(); }

}  // namespace misoagp
