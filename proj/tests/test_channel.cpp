#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "dki/channel.hpp"
#include "dki/error.hpp"
#include "dki/rng.hpp"

using namespace dki;

TEST_CASE("fading samplers") {
    CHECK(sample_fading(FadingModel{FadingKind::Constant, 1.0, 1.0, 1.0}, 5u) == 1.0);
    CHECK(sample_fading(FadingModel{FadingKind::DegenerateZero, 0.0, 0.0, 1.0}, 5u) == 0.0);

    SUBCASE("uniform interval moments") {
        const FadingModel m{FadingKind::UniformInterval, 1.0, 2.0, 1.0};
        Engine eng(123);
        const int N = 100000;
        double sum = 0.0;
        for (int i = 0; i < N; ++i) {
            const double g = sample_fading(m, eng);
            REQUIRE(g >= 1.0);
            REQUIRE(g <= 2.0);
            sum += g;
        }
        CHECK(std::abs(sum / N - 1.5) <= 3.0 * (1.0 / std::sqrt(12.0)) / std::sqrt(N));
    }
    SUBCASE("truncated Rayleigh stays on its support") {
        const FadingModel m{FadingKind::TruncatedRayleigh, 0.3, 1.7, 1.0};
        Engine eng(9);
        for (int i = 0; i < 20000; ++i) {
            const double g = sample_fading(m, eng);
            REQUIRE(g >= m.gamma);
            REQUIRE(g <= m.g_max);
        }
    }
    SUBCASE("bad models") {
        auto kind_of = [](const FadingModel& m) {
            try {
                sample_fading(m, 1u);
            } catch (const Error& e) {
                return e.kind();
            }
            return ErrorKind::Io;
        };
        CHECK(kind_of({FadingKind::UniformInterval, 0.0, 1.0, 1.0}) == ErrorKind::InvalidModel);
        CHECK(kind_of({FadingKind::Constant, -1.0, 1.0, 1.0}) == ErrorKind::InvalidModel);
        CHECK(kind_of({FadingKind::UniformInterval, 2.0, 1.0, 1.0}) == ErrorKind::InvalidModel);
        CHECK(kind_of({FadingKind::TruncatedRayleigh, 0.5, 1.0, 0.0}) == ErrorKind::InvalidModel);
        CHECK(kind_of({FadingKind::TruncatedRayleigh, 40.0, 41.0, 1.0}) == ErrorKind::InvalidModel);
        CHECK_THROWS_AS(parse_fading_kind("lognormal"), Error);
        CHECK(parse_fading_kind("truncated-rayleigh") == FadingKind::TruncatedRayleigh);
    }
}

TEST_CASE("noiseless channel scales the codeword") {
    const ChannelParams ch{1.0, 0.0, 1.0, 1.0};
    Eigen::VectorXd c(4);
    c << 0.1, -0.2, 0.3, 0.05;
    const auto out = transmit(c, 1.7, ch, 3);
    CHECK(out.y == 1.7 * c);
    CHECK(out.g_used == 1.7);
    CHECK(out.noise_seed == 3u);
}

TEST_CASE("noise is shared across codewords for a fixed seed") {
    const ChannelParams ch{1.0, 0.8, 1.0, 1.0};
    Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(32, -0.1, 0.1);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(32);
    const auto y = transmit(c, 1.3, ch, 77).y;
    const auto y0 = transmit(zero, 1.3, ch, 77).y;
    CHECK(y == (1.3 * c + y0).eval());
    CHECK(((y - y0) - 1.3 * c).cwiseAbs().maxCoeff() <= 1e-15);

    const auto again = transmit(c, 1.3, ch, 77).y;
    CHECK(std::memcmp(again.data(), y.data(), sizeof(double) * 32) == 0);
    CHECK(transmit(c, 1.3, ch, 78).y != y);
}

TEST_CASE("noise power and per-coordinate variance") {
    const double sigma2 = 2.5;
    const ChannelParams ch{1.0, sigma2, 1.0, 1.0};
    for (Eigen::Index n : {16, 64, 256}) {
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
        const int trials = 10000;
        double norm_sum = 0.0;
        Eigen::VectorXd sq = Eigen::VectorXd::Zero(n);
        for (int t = 0; t < trials; ++t) {
            const auto y = transmit(zero, 0.7, ch, derive_seed(1, 2, static_cast<std::uint64_t>(t))).y;
            norm_sum += y.squaredNorm();
            sq += y.cwiseAbs2();
        }
        CHECK(std::abs(norm_sum / trials - sigma2) <= 3.0 * std::sqrt(2.0 / n) * sigma2);
        const double per_coord = sq.sum() / (static_cast<double>(trials) * n);
        CHECK(std::abs(per_coord - sigma2 / n) <= 0.05 * sigma2 / n);
    }
}

TEST_CASE("transmit rejects non-finite input") {
    const ChannelParams ch{1.0, 1.0, 1.0, 1.0};
    Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
    c[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(transmit(c, 1.0, ch, 1), Error);
    c[1] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(transmit(c, 1.0, ch, 1), Error);
    CHECK_THROWS_AS(transmit(Eigen::VectorXd::Zero(3), std::numeric_limits<double>::quiet_NaN(), ch, 1), Error);
}

TEST_CASE("uniform ball sampler") {
    Engine eng(4);
    const int N = 50000;
    const double R = 2.0;
    int inner_half = 0;
    for (int i = 0; i < N; ++i) {
        const Eigen::VectorXd x = uniform_in_ball(eng, 3, R);
        REQUIRE(x.norm() <= R * (1 + 1e-15));
        if (x.norm() <= R / 2) ++inner_half;
    }
    // Volume fraction of the half-radius ball in 3-D is 1/8.
    const double p = 1.0 / 8.0;
    CHECK(std::abs(static_cast<double>(inner_half) / N - p) <= 4.0 * std::sqrt(p * (1 - p) / N));
}
