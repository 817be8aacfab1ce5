#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace misoagp {

/// A point of the search space in raw (user) units.
using RawPoint = Eigen::VectorXd;
/// A point of [0,1]^d. Every optimizer internal works on these.
using UnitPoint = Eigen::VectorXd;

struct Dimension {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    bool log10_scaled = false;
};

/// Box-bounded domain. Log-scaled dimensions are mapped through log10
/// before the affine map onto [0,1].
class SearchSpace {
public:
    SearchSpace() = default;
    explicit SearchSpace(std::vector<Dimension> dims);

    static SearchSpace unit_cube(std::size_t d);

    std::size_t dim() const noexcept { return dims_.size(); }
    const std::vector<Dimension>& dims() const noexcept { return dims_; }

    /// Throws BoundsError naming the first offending dimension.
    UnitPoint to_internal(const RawPoint& x) const;
    RawPoint from_internal(const UnitPoint& u) const;

    bool contains(const RawPoint& x) const;

private:
    std::vector<Dimension> dims_;
};

enum class LhsMode { jittered, centered };

/// n points in [0,1]^d with exactly one point per stratum [k/n,(k+1)/n)
/// along every axis.
std::vector<UnitPoint> latin_hypercube(std::size_t d, std::size_t n, std::uint64_t seed,
                                       LhsMode mode = LhsMode::jittered);

inline std::vector<UnitPoint> latin_hypercube(const SearchSpace& space, std::size_t n, std::uint64_t seed,
                                              LhsMode mode = LhsMode::jittered) {
    return latin_hypercube(space.dim(), n, seed, mode);
}

double squared_distance(const UnitPoint& a, const UnitPoint& b);

}  // namespace misoagp
