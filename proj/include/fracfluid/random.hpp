#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace fracfluid {

/// 64-bit linear congruential generator x' = 6364136223846793005 x + 1442695040888963407 (mod 2^64).
using Lcg64 = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0ULL>;

/// Uniform in [-1, 1) from the top 53 bits of the next state.
inline double uniform_pm1(Lcg64& rng) {
    const std::uint64_t bits = rng() >> 11;
    return 2.0 * (double(bits) * 0x1.0p-53) - 1.0;
}

inline Eigen::VectorXd random_vector(Lcg64& rng, Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform_pm1(rng);
    return v;
}

}  // namespace fracfluid
