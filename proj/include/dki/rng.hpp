#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dki {

using Engine = std::mt19937_64;

// splitmix64 finalizer; used to derive independent sub-seeds from counters.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept {
    return mix64(mix64(mix64(master) ^ stream) ^ index);
}

// 53-bit uniform in [0, 1).
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

inline void fill_standard_normal(Engine& eng, Eigen::Ref<Eigen::VectorXd> out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index t = 0; t < out.size(); ++t) out[t] = normal(eng);
}

// Uniform point in the closed ball of the given radius centred at the origin:
// isotropic Gaussian direction, radius by inverse CDF r = R * U^{1/n}.
inline Eigen::VectorXd uniform_in_ball(Engine& eng, Eigen::Index n, double radius) {
    Eigen::VectorXd x(n);
    double norm = 0.0;
    do {
        fill_standard_normal(eng, x);
        norm = x.norm();
    } while (norm == 0.0);
    const double r = radius * std::pow(uniform01(eng), 1.0 / static_cast<double>(n));
    x *= r / norm;
    return x;
}

}  // namespace dki
