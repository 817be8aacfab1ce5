#pragma once

#include <cstdint>
#include <initializer_list>

namespace misoagp {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and a list of tags
/// (iteration, source index, purpose...). Same inputs, same seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = mix64(base);
    for (auto t : tags) h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
    return h;
}

namespace seed_tag {
inline constexpr std::uint64_t init_design = 1;
inline constexpr std::uint64_t source_model = 2;
inline constexpr std::uint64_t agp_model = 3;
inline constexpr std::uint64_t acquisition = 4;
inline constexpr std::uint64_t correction = 5;
}  // namespace seed_tag

}  // namespace misoagp
