#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dki/bounds.hpp"
#include "dki/error.hpp"

using namespace dki;

namespace {

ChannelParams unit_channel() { return ChannelParams{1.0, 1.0, 1.0, 1.0}; }

// Linear-domain ball volume by the two-step recursion from V_0 = 1, V_1 = 2r.
// Independent of log-gamma; fine for small n.
double ball_volume_recursive(int n, double r) {
    double even = 1.0, odd = 2.0 * r;
    for (int k = 2; k <= n; ++k) {
        double& v = (k % 2 == 0) ? even : odd;
        v *= 2.0 * std::numbers::pi * r * r / k;
    }
    return n % 2 == 0 ? even : odd;
}

}  // namespace

TEST_CASE("target set size") {
    CHECK(target_set_size(16, 0.0) == 1);
    CHECK(target_set_size(12345, 0.0) == 1);
    CHECK(target_set_size(16, 0.5) == 4);
    CHECK(target_set_size(100, 0.5) == 10);
    CHECK(target_set_size(1000, 1.0 / 3.0) == 10);  // pow() lands a hair off 10
    CHECK(target_set_size(2, 0.5) == 1);           // clamped below n
    CHECK_THROWS_AS(target_set_size(1, 0.5), Error);
    CHECK_THROWS_AS(target_set_size(16, 1.0), Error);
    CHECK_THROWS_AS(target_set_size(16, -0.1), Error);

    for (std::int64_t n : {2, 3, 10, 97, 1000, 65536}) {
        std::int64_t prev = 0;
        for (double k = 0.0; k < 1.0; k += 0.05) {
            const auto K = target_set_size(n, k);
            CHECK(K >= 1);
            CHECK(K < n);
            CHECK(K >= prev);
            prev = K;
        }
    }
}

TEST_CASE("theta and tau golden values") {
    ChannelParams ch = unit_channel();
    CHECK(theta({16, 0.0, 0.5}, ch) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(tau({16, 0.0, 0.5}, ch) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(theta({10000, 0.25, 0.25}, ch) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(tau({10000, 0.25, 0.25}, ch) == doctest::Approx(0.1 / 3.0).epsilon(1e-12));

    ch.A = 2.0;
    CHECK(theta({16, 0.0, 0.5}, ch) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK(tau_from_theta(0.5, 1.0) == doctest::Approx(0.16666666667).epsilon(1e-9));
    CHECK(tau_from_theta(0.5, 2.0) == doctest::Approx(0.66666666667).epsilon(1e-9));
    CHECK_THROWS_AS(tau_from_theta(0.5, 0.0), Error);
    CHECK_THROWS_AS(tau_from_theta(0.5, -1.0), Error);

    ch = unit_channel();
    CHECK_THROWS_AS(theta({16, 0.6, 0.5}, ch), Error);
    CHECK(theta({16, 0.5, 0.5}, ch) == doctest::Approx(1.0));  // boundary: theta == A
}

TEST_CASE("theta and tau stay below their caps and decrease in n") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 500; ++s) {
        ChannelParams ch{0.1 + 5 * u(rng), 1.0, 0.1 + 2 * u(rng), 10.0};
        const double kappa = 0.95 * u(rng);
        const double b = std::max(1e-3, (1.0 - kappa) * 0.98 * u(rng));
        double prev_theta = ch.A, prev_tau = ch.gamma * ch.gamma * ch.A / 3.0;
        for (std::int64_t n : {2, 3, 5, 16, 100, 1000, 100000}) {
            const CodeParams code{n, kappa, b};
            const double t = theta(code, ch);
            const double ta = tau(code, ch);
            CHECK(t < ch.A);
            CHECK(ta < ch.gamma * ch.gamma * ch.A / 3.0);
            CHECK(t < prev_theta);
            CHECK(ta < prev_tau);
            prev_theta = t;
            prev_tau = ta;
        }
    }
}

TEST_CASE("sphere log volume") {
    CHECK(sphere_log_volume(1, 3.0) == doctest::Approx(std::log2(6.0)).epsilon(1e-12));
    CHECK(sphere_log_volume(2, 1.0) == doctest::Approx(std::log2(std::numbers::pi)).epsilon(1e-12));
    CHECK(sphere_log_volume(3, 1.0) == doctest::Approx(std::log2(4.0 * std::numbers::pi / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(sphere_log_volume(0, 1.0), Error);
    CHECK_THROWS_AS(sphere_log_volume(3, 0.0), Error);
    CHECK_THROWS_AS(sphere_log_volume(3, -1.0), Error);

    SUBCASE("matches the linear-domain recursion") {
        for (double r : {0.3, 1.0, 1.7}) {
            for (int n = 1; n <= 60; ++n) {
                const double oracle = std::log2(ball_volume_recursive(n, r));
                CHECK(std::abs(std::exp2(sphere_log_volume(n, r) - oracle) - 1.0) < 1e-9);
            }
        }
    }
    SUBCASE("recurrence and homogeneity") {
        for (double r : {0.05, 0.5, 1.0, 3.0, 40.0}) {
            for (int n = 3; n <= 60; ++n) {
                const double lhs = sphere_log_volume(n, r);
                const double rhs = sphere_log_volume(n - 2, r) + std::log2(2.0 * std::numbers::pi * r * r / n);
                CHECK(std::abs(std::exp2(rhs - lhs) - 1.0) < 1e-9);
                CHECK(lhs == doctest::Approx(n * std::log2(r) + sphere_log_volume(n, 1.0)).epsilon(1e-9));
            }
        }
    }
    SUBCASE("no overflow far beyond linear range") {
        const double v = sphere_log_volume(100000, 1.0);
        CHECK(std::isfinite(v));
        CHECK(v < 0.0);
    }
}

TEST_CASE("packing density bounds") {
    auto [lo10, hi10] = packing_density_bounds(10);
    CHECK(lo10 == -10.0);
    CHECK(hi10 == doctest::Approx(-5.99));
    auto [lo1, hi1] = packing_density_bounds(1);
    CHECK(lo1 == -1.0);
    CHECK(hi1 == doctest::Approx(-0.599));
    auto [lo100, hi100] = packing_density_bounds(100);
    CHECK(lo100 == -100.0);
    CHECK(hi100 == doctest::Approx(-59.9));
    CHECK(lo100 <= hi100);
}

TEST_CASE("achievable log codebook") {
    const ChannelParams ch = unit_channel();
    CHECK(achievable_log_codebook({16, 0.0, 0.5}, ch) == 0.0);
    CHECK(achievable_log_codebook({1 << 20, 0.0, 0.01}, ch) == doctest::Approx(3093299.2).epsilon(1e-9));
    CHECK(achievable_log_codebook({1 << 20, 0.999, 0.0005}, ch) == 0.0);

    SUBCASE("agrees with the (1/2) n log2(A/theta) - 2n route") {
        for (std::int64_t n : {64, 1024, 1 << 16, 1 << 22}) {
            for (double kappa : {0.0, 0.2, 0.5}) {
                const CodeParams code{n, kappa, 0.05};
                const double oracle = 0.5 * n * std::log2(ch.A / theta(code, ch)) - 2.0 * n;
                CHECK(achievable_log_codebook(code, ch) == doctest::Approx(std::max(0.0, oracle)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("converse log codebook") {
    const ChannelParams ch = unit_channel();
    CHECK(converse_log_codebook({16, 0.0, 0.05}, ch) == doctest::Approx(57.6501169748).epsilon(1e-10));
    CHECK(converse_log_codebook({16, 0.5, 0.05}, ch) == doctest::Approx(89.6181352677).epsilon(1e-10));
    CHECK(converse_log_codebook({2, 0.0, 0.05}, ch) == doctest::Approx(1.2044749359).epsilon(1e-9));

    SUBCASE("agrees with the (n/2) log2(A/eps' + 1) - 0.599 n route") {
        for (double A : {0.5, 1.0, 7.0}) {
            const ChannelParams c{A, 1.0, 1.0, 1.0};
            for (std::int64_t n : {2, 3, 16, 100, 4096}) {
                for (double kappa : {0.0, 0.3, 0.7}) {
                    const CodeParams code{n, kappa, 0.05};
                    const double eps = A / std::pow(static_cast<double>(n), 2.0 * (1.0 + kappa + 0.05));
                    const double oracle = 0.5 * n * std::log2(A / eps + 1.0) - 0.599 * n;
                    CHECK(converse_log_codebook(code, c) == doctest::Approx(oracle).epsilon(1e-12));
                }
            }
        }
    }
    SUBCASE("achievable never exceeds converse on a sweep grid") {
        for (std::int64_t n = 2; n <= 5000; n = n < 64 ? n + 1 : n * 3 / 2) {
            for (double kappa : {0.0, 0.25, 0.5, 0.75, 0.95}) {
                for (double b : {0.01, 0.05, 0.2, 0.5}) {
                    if (b + kappa > 1.0) continue;
                    const CodeParams code{n, kappa, b};
                    CHECK(achievable_log_codebook(code, ch) <= converse_log_codebook(code, ch));
                }
            }
        }
    }
}

TEST_CASE("rate bounds") {
    CHECK(rate_bounds(0.0) == std::pair{0.25, 1.0});
    CHECK(rate_bounds(0.5) == std::pair{0.125, 1.5});
    auto [lo, hi] = rate_bounds(std::nextafter(1.0, 0.0));
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(2.0));
    CHECK_THROWS_AS(rate_bounds(1.0), Error);
    CHECK_THROWS_AS(rate_bounds(-0.01), Error);
    for (double k = 0.0; k < 1.0; k += 0.01) {
        auto [l, h] = rate_bounds(k);
        CHECK(l <= h);
    }
}

TEST_CASE("converse minimum distance") {
    ChannelParams ch = unit_channel();
    CHECK(converse_min_distance({10, 0.0, 0.05}, ch) == doctest::Approx(0.5636765863).epsilon(1e-9));
    CHECK(converse_min_distance({100, 0.0, 0.05}, ch) == doctest::Approx(0.1588656463).epsilon(1e-9));
    ch.A = 4.0;
    CHECK(converse_min_distance({10, 0.0, 0.05}, ch) == doctest::Approx(1.1273531725).epsilon(1e-9));

    SUBCASE("epsilon' and alpha_n forms agree") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::uniform_int_distribution<std::int64_t> un(2, 1000000);
        for (int s = 0; s < 1000; ++s) {
            const ChannelParams c{0.01 + 100 * u(rng), 1.0, 1.0, 1.0};
            const double kappa = 0.999 * u(rng);
            const double b = std::max(1e-6, (1.0 - kappa) * u(rng));
            const CodeParams code{un(rng), kappa, b};
            const double a = converse_min_distance(code, c);
            const double alt = converse_alpha(code, c);
            CHECK(std::abs(a - alt) <= 1e-12 * std::abs(alt));
        }
    }
}

TEST_CASE("type I error bound") {
    ChannelParams ch = unit_channel();
    CHECK(type1_error_bound({10000, 0.25, 0.25}, ch) == doctest::Approx(0.27).epsilon(1e-12));
    CHECK(type1_error_bound({100, 0.0, 0.5}, ch) == 1.0);

    SUBCASE("Chebyshev route 3 sigma^4 / (n tau^2)") {
        for (std::int64_t n : {1000, 100000, 10000000}) {
            const CodeParams code{n, 0.3, 0.4};
            const double t = tau(code, ch);
            const double oracle = 3.0 * ch.sigma2 * ch.sigma2 / (n * t * t);
            CHECK(type1_error_bound(code, ch) == doctest::Approx(std::min(1.0, oracle)).epsilon(1e-12));
        }
    }
    SUBCASE("doubling gamma divides by 16") {
        const CodeParams code{10000, 0.25, 0.25};
        ChannelParams c2 = ch;
        c2.gamma = 2.0;
        c2.g_max = 2.0;
        CHECK(type1_error_bound(code, c2) == doctest::Approx(type1_error_bound(code, ch) / 16.0).epsilon(1e-12));
    }
    SUBCASE("monotone in n") {
        double prev = 2.0;
        for (std::int64_t n = 2; n < 10000000; n *= 3) {
            const double v = type1_error_bound({n, 0.25, 0.25}, ch);
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("type II error bound") {
    const ChannelParams ch = unit_channel();
    const CodeParams big{1000000, 0.0, 0.5};
    const double t = tau(big, ch);
    CHECK(type2_error_bound(big, ch) == doctest::Approx((144.0 * (1.0 + t) + 27.0) / 1000.0).epsilon(1e-12));
    CHECK(type2_error_bound(big, ch) == doctest::Approx(0.1725178933).epsilon(1e-9));
    CHECK(type2_components({10000, 0.25, 0.25}, ch).zeta1 == doctest::Approx(0.27).epsilon(1e-12));
    CHECK(type2_error_bound({10000, 0.0, 0.5}, ch) == 1.0);

    SUBCASE("equals K (zeta0 + zeta1) with K = n^kappa") {
        for (std::int64_t n : {100000, 10000000}) {
            for (double kappa : {0.0, 0.1, 0.3}) {
                const CodeParams code{n, kappa, 0.6};
                const auto z = type2_components(code, ch);
                const double K = std::pow(static_cast<double>(n), kappa);
                CHECK(z.composite == doctest::Approx(std::min(1.0, K * (z.zeta0 + z.zeta1))).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("bound report aggregates") {
    const BoundReport r = bound_report({16, 0.0, 0.5}, unit_channel());
    CHECK(r.theta_n == doctest::Approx(0.5));
    CHECK(r.tau_n == doctest::Approx(1.0 / 6.0));
    CHECK(r.K == 1);
    CHECK(r.rate_lower == 0.25);
    CHECK(r.rate_upper == 1.0);
    CHECK(r.rate_lower <= r.rate_upper);
    CHECK(r.log2M_lower >= 0.0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(CodeParams{1, 0.0, 0.5}), Error);
    CHECK_THROWS_AS(validate(CodeParams{4, 0.0, 0.0}), Error);
    CHECK_THROWS_AS(validate(CodeParams{4, 0.0, 1.0}), Error);
    CHECK_THROWS_AS(validate(CodeParams{4, 0.7, 0.4}), Error);
    CHECK_NOTHROW(validate(CodeParams{4, 0.5, 0.5}));
    CHECK_THROWS_AS(validate(ChannelParams{0.0, 1.0, 1.0, 1.0}), Error);
    CHECK_THROWS_AS(validate(ChannelParams{1.0, -1.0, 1.0, 1.0}), Error);
    CHECK_THROWS_AS(validate(ChannelParams{1.0, 1.0, 0.0, 1.0}), Error);
    CHECK_THROWS_AS(validate(ChannelParams{1.0, 1.0, 1.0, 0.5}), Error);
}
