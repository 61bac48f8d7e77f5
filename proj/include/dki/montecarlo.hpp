#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dki/bounds.hpp"
#include "dki/decoder.hpp"
#include "dki/packing.hpp"

namespace dki {

/// Finite surrogate for the fading support: ascending, starts at gamma.
struct GGrid {
    std::vector<double> points;

    static GGrid uniform(double gamma, double g_max, std::int64_t count);
    /// Sorts, de-duplicates and inserts gamma when absent. All points must lie in [gamma, g_max].
    static GGrid from_points(std::vector<double> points, double gamma, double g_max);
};

struct SimOptions {
    std::int64_t trials = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// 3-sigma binomial half-width, 3 * sqrt(p (1 - p) / trials).
double binomial_half_width(double p, std::int64_t trials);

struct GridEstimate {
    double g = 0;
    std::int64_t events = 0;
    double p_hat = 0;
    double half_width = 0;
};

/// Worst case over the grid, plus the per-point breakdown.
struct ErrorEstimate {
    double p_hat = 0;
    std::int64_t trials = 0;
    double half_width = 0;
    double g_worst = 0;
    std::uint64_t seed = 0;
    std::vector<GridEstimate> per_g;
};

enum class TargetPolicy { Nearest, Random };

/// Builds a size-K target set for message i: with `include_i` it holds i and the
/// K - 1 others chosen by the policy, otherwise K messages other than i.
/// `Nearest` picks by distance to codeword i (ties by index).
TargetSet make_target(const Codebook& cb, std::int64_t i, std::int64_t K, bool include_i, TargetPolicy policy,
                      std::uint64_t seed);

/// Decision threshold slack used by all experiments on this codebook.
double decoder_tau(const Codebook& cb, const ChannelParams& ch);

/// Type-I: frequency of rejecting message i in target. Noise for trial t is a
/// function of (seed, t) only, so every grid point sees the same noise.
ErrorEstimate estimate_type1(const Codebook& cb, std::int64_t i, const TargetSet& target, const ChannelParams& ch,
                             const GGrid& grid, const SimOptions& opts);

/// Type-II: frequency of accepting message i not in target.
ErrorEstimate estimate_type2(const Codebook& cb, std::int64_t i, const TargetSet& target, const ChannelParams& ch,
                             const GGrid& grid, const SimOptions& opts);

/// Per-trial k_identify outcomes when sending message i at fading g, on the same
/// noise stream the estimators use.
std::vector<std::uint8_t> trial_decisions(const Codebook& cb, std::int64_t i, const TargetSet& target,
                                          const ChannelParams& ch, double g, const SimOptions& opts);

enum class NoiseCoupling { Shared, Independent };

struct PairEstimate {
    double p1 = 0;
    double p2 = 0;
    std::int64_t trials = 0;
    double hw1 = 0;
    double hw2 = 0;
    double sum() const { return p1 + p2; }
};

/// Zero-fading experiment: with g = 0 the output carries no information about the
/// message, so P_{e,1}(i1) + P_{e,2}(i2) = 1.
PairEstimate degenerate_fading_experiment(const Codebook& cb, std::int64_t i1, std::int64_t i2, const TargetSet& target,
                                          const ChannelParams& ch, NoiseCoupling coupling, const SimOptions& opts);

struct ConversePoint {
    double d = 0;
    PairEstimate est;
};

/// Two codewords +-(d/2) e_0, target {first}; error sum at g = gamma for each d.
/// The same noise stream is used for every d.
std::vector<ConversePoint> converse_distance_experiment(const CodeParams& code, const ChannelParams& ch,
                                                        std::span<const double> distances, NoiseCoupling coupling,
                                                        const SimOptions& opts);

struct SweepRow {
    std::int64_t n = 0;
    double kappa = 0;
    double b = 0;
    double theta = 0;
    std::int64_t M = 0;
    double log2M = 0;
    double rate_ratio = 0;        // log2 M / (n log2 n)
    double converse_ratio = 0;    // converse_log_codebook / (n log2 n)
    double achievable_ratio = 0;  // achievable_log_codebook / (n log2 n)
    double log2_cap = 0;          // volume-ratio cap
    bool within_converse = false;
    bool within_cap = false;
};

std::vector<SweepRow> scaling_sweep(std::span<const std::int64_t> n_list, const CodeParams& code_template,
                                    const ChannelParams& ch, std::uint64_t seed, const PackingOptions& opts);

}  // namespace dki
