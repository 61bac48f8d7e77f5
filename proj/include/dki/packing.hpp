#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "dki/bounds.hpp"

namespace dki {

/// A sphere-packing codebook in the normalized domain. Codeword i is column i
/// of `codewords`; every centre lies in the ball of radius R_inner and centres
/// are pairwise at least 2 * r0 apart.
struct Codebook {
    std::int64_t n = 0;
    Eigen::MatrixXd codewords;  // n x M
    double A = 1.0;
    double kappa = 0.0;
    double b = 0.5;
    double theta = 0.0;
    double r0 = 0.0;       // sqrt(theta)
    double R_inner = 0.0;  // sqrt(A) - sqrt(theta)
    std::uint64_t seed = 0;
    std::int64_t saturation_rejections = 0;

    Eigen::Index size() const { return codewords.cols(); }
    auto codeword(Eigen::Index i) const { return codewords.col(i); }
};

/// Fills in r0 / R_inner from (A, theta) around an explicit set of centres.
Codebook make_codebook(const CodeParams& code, double A, double theta, std::uint64_t seed,
                       Eigen::MatrixXd codewords);

struct PackingOptions {
    std::int64_t saturation_T = 5000;     // consecutive rejections that count as saturated
    std::int64_t max_codewords = 100000;  // memory cap
    std::optional<double> theta_override;  // force theta instead of A * n^{-(1-(b+kappa))/2}
};

/// Random sequential insertion: uniform candidates in the inner ball are accepted
/// when at least 2 r0 from every accepted centre; stops after saturation_T
/// consecutive rejections. Deterministic in (seed, params, options).
Codebook build_codebook(const CodeParams& code, const ChannelParams& ch, std::uint64_t seed,
                        const PackingOptions& opts = {});

/// Explicit codebook of `count` centres at +-R_inner along the coordinate axes
/// (+e_0, -e_0, +e_1, ...). Meant for high-dimensional simulations where random
/// packing would never saturate.
Codebook axis_codebook(const CodeParams& code, const ChannelParams& ch, std::int64_t count,
                       std::optional<double> theta_override = std::nullopt);

struct ValidationReport {
    std::int64_t M = 0;
    double max_norm = 0;
    double min_distance = 0;  // +inf when M == 1
    double R_inner = 0;
    double two_r0 = 0;
    double sqrt_A = 0;
    bool power_ok = false;     // max_norm <= R_inner (+ slack)
    bool distance_ok = false;  // min_distance >= 2 r0 (- slack)

    bool passed() const { return power_ok && distance_ok && M >= 1; }
};

ValidationReport validate_codebook(const Codebook& cb, const ChannelParams& ch, double slack = 1e-12);

/// Checks the construction invariants with no slack at all, using the same
/// predicates the construction used.
bool satisfies_packing_exactly(const Codebook& cb);

/// Fraction of `samples` uniform points of the inner ball lying within 2 r0 of
/// some centre.
double coverage_certificate(const Codebook& cb, std::int64_t samples, std::uint64_t seed);

/// log2 of Vol(R_inner + r0) / Vol(r0), an upper bound on log2 M.
double log2_volume_ratio_cap(const Codebook& cb);

/// log2 of M * Vol(r0) / Vol(R_inner + r0).
double log2_packing_density(const Codebook& cb);

void write_codebook(std::ostream& os, const Codebook& cb);
Codebook read_codebook(std::istream& is);
void save_codebook(const std::string& path, const Codebook& cb);
Codebook load_codebook(const std::string& path);

}  // namespace dki
