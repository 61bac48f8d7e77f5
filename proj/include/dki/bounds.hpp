#pragma once

#include <cstdint>
#include <utility>

namespace dki {

/// Code-side parameters: block length n, target identification rate kappa
/// (the target set has K = n^kappa members) and slack constant b.
///
/// Valid when n >= 2, 0 <= kappa < 1, 0 < b < 1 and b + kappa <= 1. At
/// b + kappa == 1 the packing radius equals sqrt(A) and every codebook
/// collapses to the single codeword at the origin.
struct CodeParams {
    std::int64_t n = 2;
    double kappa = 0.0;
    double b = 0.5;
};

/// Channel-side parameters in the normalized domain.
struct ChannelParams {
    double A = 1.0;       // power budget, ||c|| <= sqrt(A)
    double sigma2 = 1.0;  // noise variance; per-coordinate variance is sigma2 / n
    double gamma = 1.0;   // infimum of the fading support
    double g_max = 1.0;   // supremum of the fading support
};

void validate(const CodeParams& code);
void validate(const ChannelParams& ch);

struct BoundReport {
    double theta_n = 0;
    double tau_n = 0;
    std::int64_t K = 1;
    double rate_lower = 0;
    double rate_upper = 0;
    double log2M_lower = 0;
    double log2M_upper = 0;
    double min_dist_converse = 0;
    double type1_bound = 0;
    double type2_bound = 0;
};

/// Split of the type-II bound into the cross-term event and the
/// small-norm event, each per target message.
struct TypeTwoComponents {
    double zeta0 = 0;
    double zeta1 = 0;
    double composite = 0;  // clamped to [0, 1]
};

/// K(n, kappa) = ceil(n^kappa), clamped to [1, n - 1].
std::int64_t target_set_size(std::int64_t n, double kappa);

/// Packing-radius parameter theta_n = A * n^{-(1 - (b + kappa)) / 2}.
double theta(const CodeParams& code, const ChannelParams& ch);

/// Decoding-threshold slack tau = gamma^2 * theta / 3.
double tau_from_theta(double theta_n, double gamma);
double tau(const CodeParams& code, const ChannelParams& ch);

/// log2 of the volume of an n-ball of radius r.
double sphere_log_volume(std::int64_t n, double r);

/// log2 of the packing-density bounds (lower 2^{-n}, upper 2^{-0.599 n}).
std::pair<double, double> packing_density_bounds(std::int64_t n);

/// Achievability lower bound on log2 M, clamped at 0.
double achievable_log_codebook(const CodeParams& code, const ChannelParams& ch);
/// Converse upper bound on log2 M.
double converse_log_codebook(const CodeParams& code, const ChannelParams& ch);

std::pair<double, double> rate_bounds(double kappa);

/// Minimum pairwise codeword distance required by any good code, 2 sqrt(n eps'_n)
/// with eps'_n = A / n^{2(1 + kappa + b)}.
double converse_min_distance(const CodeParams& code, const ChannelParams& ch);
/// Same quantity via alpha_n = 2 sqrt(A) / n^{(1 + 2(kappa + b)) / 2}.
double converse_alpha(const CodeParams& code, const ChannelParams& ch);

double type1_error_bound(const CodeParams& code, const ChannelParams& ch);
TypeTwoComponents type2_components(const CodeParams& code, const ChannelParams& ch);
double type2_error_bound(const CodeParams& code, const ChannelParams& ch);

BoundReport bound_report(const CodeParams& code, const ChannelParams& ch);

}  // namespace dki
