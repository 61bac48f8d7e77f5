#include "dki/channel.hpp"

#include <cmath>

#include "dki/error.hpp"

namespace dki {

FadingKind parse_fading_kind(const std::string& name) {
    if (name == "constant") return FadingKind::Constant;
    if (name == "uniform-interval") return FadingKind::UniformInterval;
    if (name == "truncated-rayleigh") return FadingKind::TruncatedRayleigh;
    if (name == "degenerate-zero") return FadingKind::DegenerateZero;
    fail(ErrorKind::InvalidModel, "unknown fading kind '" + name + "'");
}

std::string to_string(FadingKind kind) {
    switch (kind) {
        case FadingKind::Constant: return "constant";
        case FadingKind::UniformInterval: return "uniform-interval";
        case FadingKind::TruncatedRayleigh: return "truncated-rayleigh";
        case FadingKind::DegenerateZero: return "degenerate-zero";
    }
    return "unknown";
}

namespace {

// Rayleigh mass of [lo, hi].
double rayleigh_mass(double lo, double hi, double scale) {
    const double s2 = 2.0 * scale * scale;
    return std::exp(-lo * lo / s2) - std::exp(-hi * hi / s2);
}

}  // namespace

void validate(const FadingModel& model) {
    if (model.kind == FadingKind::DegenerateZero) return;
    if (!(model.gamma > 0.0) || !std::isfinite(model.gamma))
        fail(ErrorKind::InvalidModel, "fading: gamma must be > 0 for " + to_string(model.kind));
    if (!(model.g_max >= model.gamma) || !std::isfinite(model.g_max))
        fail(ErrorKind::InvalidModel, "fading: g_max must be >= gamma");
    if (model.kind == FadingKind::TruncatedRayleigh) {
        if (!(model.scale > 0.0)) fail(ErrorKind::InvalidModel, "fading: Rayleigh scale must be > 0");
        if (model.g_max > model.gamma && rayleigh_mass(model.gamma, model.g_max, model.scale) < 1e-9)
            fail(ErrorKind::InvalidModel, "fading: Rayleigh support [gamma, g_max] has negligible mass");
    }
}

double sample_fading(const FadingModel& model, Engine& eng) {
    validate(model);
    switch (model.kind) {
        case FadingKind::DegenerateZero: return 0.0;
        case FadingKind::Constant: return model.gamma;
        case FadingKind::UniformInterval: {
            const double g = model.gamma + (model.g_max - model.gamma) * uniform01(eng);
            return std::min(g, model.g_max);
        }
        case FadingKind::TruncatedRayleigh: {
            if (model.g_max == model.gamma) return model.gamma;
            for (;;) {
                const double g = model.scale * std::sqrt(-2.0 * std::log1p(-uniform01(eng)));
                if (g >= model.gamma && g <= model.g_max) return g;
            }
        }
    }
    return model.gamma;
}

double sample_fading(const FadingModel& model, std::uint64_t seed) {
    Engine eng(seed);
    return sample_fading(model, eng);
}

Eigen::VectorXd standard_noise(Eigen::Index n, std::uint64_t seed) {
    Engine eng(seed);
    Eigen::VectorXd z(n);
    fill_standard_normal(eng, z);
    return z;
}

ChannelOutput transmit(const Eigen::Ref<const Eigen::VectorXd>& codeword, double g, const ChannelParams& ch,
                       std::uint64_t seed) {
    require(codeword.size() >= 1, "transmit: empty codeword");
    require(codeword.allFinite(), "transmit: codeword has non-finite entries");
    require(std::isfinite(g), "transmit: fading coefficient is not finite");
    require(std::isfinite(ch.sigma2) && ch.sigma2 >= 0.0, "transmit: sigma2 must be finite and >= 0");
    const double sd = std::sqrt(ch.sigma2 / static_cast<double>(codeword.size()));
    ChannelOutput out;
    out.y = g * codeword + sd * standard_noise(codeword.size(), seed);
    out.g_used = g;
    out.noise_seed = seed;
    return out;
}

}  // namespace dki
