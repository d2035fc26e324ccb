// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace maplace
{

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream per (seed, trial): adding trials never reshuffles the
// earlier ones.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial)
{
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ (trial * 0xd1b54a32d192ed03ULL)));
}

// Uniform draw on [lo, hi). Written out instead of using
// std::uniform_real_distribution so streams match across standard libraries.
inline double uniform(std::mt19937_64 &g, double lo, double hi)
{
    const double u = static_cast<double>(g() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

} // namespace maplace
