#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "dki/bounds.hpp"
#include "dki/rng.hpp"

namespace dki {

enum class FadingKind { Constant, UniformInterval, TruncatedRayleigh, DegenerateZero };

FadingKind parse_fading_kind(const std::string& name);
std::string to_string(FadingKind kind);

/// Block fading law. Non-degenerate kinds draw g in [gamma, g_max] with gamma > 0;
/// `Constant` always yields gamma. `DegenerateZero` (g = 0) exists only for the
/// zero-fading experiment.
struct FadingModel {
    FadingKind kind = FadingKind::Constant;
    double gamma = 1.0;
    double g_max = 1.0;
    double scale = 1.0;  // Rayleigh scale
};

void validate(const FadingModel& model);

double sample_fading(const FadingModel& model, Engine& eng);
double sample_fading(const FadingModel& model, std::uint64_t seed);

struct ChannelOutput {
    Eigen::VectorXd y;
    double g_used = 0;
    std::uint64_t noise_seed = 0;
};

/// Unit-variance Gaussian noise vector used by `transmit` for this seed.
Eigen::VectorXd standard_noise(Eigen::Index n, std::uint64_t seed);

/// y = g * c + z with z_t ~ N(0, sigma2 / n) i.i.d.
ChannelOutput transmit(const Eigen::Ref<const Eigen::VectorXd>& codeword, double g, const ChannelParams& ch,
                       std::uint64_t seed);

}  // namespace dki
