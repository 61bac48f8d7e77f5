#include "dki/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dki/error.hpp"

namespace dki {

namespace {

double log2n(std::int64_t n) { return std::log2(static_cast<double>(n)); }

double power(std::int64_t n, double e) { return std::pow(static_cast<double>(n), e); }

}  // namespace

void validate(const CodeParams& code) {
    require(code.n >= 2, "code.n must be >= 2 (got " + std::to_string(code.n) + ")");
    require(code.kappa >= 0.0 && code.kappa < 1.0, "code.kappa must lie in [0, 1)");
    require(code.b > 0.0 && code.b < 1.0, "code.b must lie in (0, 1)");
    require(code.b + code.kappa <= 1.0, "code.b + code.kappa must not exceed 1");
}

void validate(const ChannelParams& ch) {
    require(std::isfinite(ch.A) && ch.A > 0.0, "channel.A must be > 0");
    require(std::isfinite(ch.sigma2) && ch.sigma2 >= 0.0, "channel.sigma2 must be >= 0");
    require(std::isfinite(ch.gamma) && ch.gamma > 0.0, "channel.gamma must be > 0");
    require(std::isfinite(ch.g_max) && ch.g_max >= ch.gamma, "channel.g_max must be >= channel.gamma");
}

std::int64_t target_set_size(std::int64_t n, double kappa) {
    require(n >= 2, "target_set_size: n must be >= 2");
    require(kappa >= 0.0 && kappa < 1.0, "target_set_size: kappa must lie in [0, 1)");
    const double x = power(n, kappa);
    const double nearest = std::round(x);
    const double k = std::abs(x - nearest) <= 1e-9 * nearest ? nearest : std::ceil(x);
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(k), 1, n - 1);
}

double theta(const CodeParams& code, const ChannelParams& ch) {
    validate(code);
    require(ch.A > 0.0, "theta: A must be > 0");
    return ch.A * power(code.n, -(1.0 - (code.b + code.kappa)) / 2.0);
}

double tau_from_theta(double theta_n, double gamma) {
    require(gamma > 0.0, "tau: gamma must be > 0 (zero fading infimum has zero capacity)");
    require(theta_n >= 0.0, "tau: theta must be >= 0");
    return gamma * gamma * theta_n / 3.0;
}

double tau(const CodeParams& code, const ChannelParams& ch) { return tau_from_theta(theta(code, ch), ch.gamma); }

double sphere_log_volume(std::int64_t n, double r) {
    require(n >= 1, "sphere_log_volume: n must be >= 1");
    require(r > 0.0 && std::isfinite(r), "sphere_log_volume: r must be > 0");
    const double half = static_cast<double>(n) / 2.0;
    return half * std::log2(std::numbers::pi) + static_cast<double>(n) * std::log2(r) -
           std::lgamma(half + 1.0) / std::numbers::ln2;
}

std::pair<double, double> packing_density_bounds(std::int64_t n) {
    const auto dn = static_cast<double>(n);
    return {-dn, -0.599 * dn};
}

double achievable_log_codebook(const CodeParams& code, const ChannelParams& ch) {
    validate(code);
    validate(ch);
    const auto n = static_cast<double>(code.n);
    const double raw = ((1.0 - (code.b + code.kappa)) / 4.0) * n * log2n(code.n) - 2.0 * n;
    return std::max(0.0, raw);
}

double converse_log_codebook(const CodeParams& code, const ChannelParams& ch) {
    validate(code);
    validate(ch);
    const auto n = static_cast<double>(code.n);
    const double e = 1.0 + code.kappa + code.b;
    return e * n * log2n(code.n) + (n / 2.0) * std::log2(1.0 + power(code.n, -2.0 * e)) - 0.599 * n;
}

std::pair<double, double> rate_bounds(double kappa) {
    require(kappa >= 0.0 && kappa < 1.0, "rate_bounds: kappa must lie in [0, 1)");
    return {(1.0 - kappa) / 4.0, 1.0 + kappa};
}

double converse_min_distance(const CodeParams& code, const ChannelParams& ch) {
    validate(code);
    validate(ch);
    const auto n = static_cast<double>(code.n);
    const double eps = ch.A / power(code.n, 2.0 * (1.0 + code.kappa + code.b));
    return 2.0 * std::sqrt(n * eps);
}

double converse_alpha(const CodeParams& code, const ChannelParams& ch) {
    validate(code);
    validate(ch);
    return 2.0 * std::sqrt(ch.A) / power(code.n, (1.0 + 2.0 * (code.kappa + code.b)) / 2.0);
}

double type1_error_bound(const CodeParams& code, const ChannelParams& ch) {
    validate(code);
    validate(ch);
    const double s4 = ch.sigma2 * ch.sigma2;
    const double g4 = std::pow(ch.gamma, 4);
    return std::min(1.0, 27.0 * s4 / (ch.A * ch.A * g4 * power(code.n, code.kappa + code.b)));
}

TypeTwoComponents type2_components(const CodeParams& code, const ChannelParams& ch) {
    validate(code);
    validate(ch);
    const double t = tau(code, ch);
    const double s2 = ch.sigma2;
    const double denom = ch.A * ch.A * std::pow(ch.gamma, 4);
    TypeTwoComponents out;
    out.zeta0 = 144.0 * s2 * (s2 + t) / (denom * power(code.n, code.kappa + code.b));
    out.zeta1 = 27.0 * s2 * s2 / (denom * power(code.n, code.kappa + code.b));
    out.composite = std::min(1.0, (144.0 * s2 * (s2 + t) + 27.0 * s2 * s2) / (denom * power(code.n, code.b)));
    return out;
}

double type2_error_bound(const CodeParams& code, const ChannelParams& ch) { return type2_components(code, ch).composite; }

BoundReport bound_report(const CodeParams& code, const ChannelParams& ch) {
    BoundReport r;
    r.theta_n = theta(code, ch);
    r.tau_n = tau(code, ch);
    r.K = target_set_size(code.n, code.kappa);
    std::tie(r.rate_lower, r.rate_upper) = rate_bounds(code.kappa);
    r.log2M_lower = achievable_log_codebook(code, ch);
    r.log2M_upper = converse_log_codebook(code, ch);
    r.min_dist_converse = converse_min_distance(code, ch);
    r.type1_bound = type1_error_bound(code, ch);
    r.type2_bound = type2_error_bound(code, ch);
    return r;
}

}  // namespace dki
