#include "dki/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "dki/channel.hpp"
#include "dki/error.hpp"
#include "dki/rng.hpp"

namespace dki {

namespace {

constexpr std::uint64_t kNoiseStream = 0x6e6f6973ULL;        // "nois"
constexpr std::uint64_t kSecondNoiseStream = 0x6e6f6932ULL;  // "noi2"
constexpr std::uint64_t kTargetStream = 0x74617267ULL;       // "targ"

void check_options(const SimOptions& opts) { require(opts.trials >= 1, "simulation: trials must be >= 1"); }

// Runs trials [0, trials) split into contiguous batches, one per thread. Each
// batch gets its own worker from `make_worker`; per-counter totals are merged
// by summation, so the result does not depend on the partition.
template <typename Factory>
std::vector<std::int64_t> count_events(std::int64_t trials, unsigned threads, std::size_t counters, Factory make_worker) {
    const auto workers = static_cast<std::int64_t>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(1, trials)));
    std::vector<std::vector<std::int64_t>> partial(workers, std::vector<std::int64_t>(counters, 0));
    auto run = [&](std::int64_t w) {
        auto worker = make_worker();
        const std::int64_t begin = trials * w / workers;
        const std::int64_t end = trials * (w + 1) / workers;
        for (std::int64_t t = begin; t < end; ++t) worker(t, partial[w]);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    std::vector<std::int64_t> total(counters, 0);
    for (const auto& p : partial)
        for (std::size_t c = 0; c < counters; ++c) total[c] += p[c];
    return total;
}

// Target indices ordered by distance to codeword i. The union decision does not
// depend on the order; checking likely territories first only saves work.
std::vector<std::int64_t> probe_order(const Codebook& cb, std::int64_t i, const TargetSet& target) {
    std::vector<std::int64_t> order(target.indices().begin(), target.indices().end());
    std::vector<double> dist(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) dist[k] = (cb.codeword(order[k]) - cb.codeword(i)).squaredNorm();
    std::vector<std::size_t> perm(order.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    std::vector<std::int64_t> out;
    out.reserve(order.size());
    for (auto p : perm) out.push_back(order[p]);
    return out;
}

bool union_decision(const Eigen::VectorXd& y, const Codebook& cb, std::span<const std::int64_t> order, double g,
                    double sigma2, double tau) {
    for (const std::int64_t j : order)
        if (in_territory(y, cb.codeword(j), g, sigma2, tau)) return true;
    return false;
}

void check_message(const Codebook& cb, std::int64_t i, const TargetSet& target) {
    if (i < 0 || i >= cb.size())
        fail(ErrorKind::IndexOutOfRange, "message index " + std::to_string(i) + " outside codebook of size " +
                                             std::to_string(cb.size()));
    if (target.M() != cb.size()) fail(ErrorKind::InvalidParameter, "target set was built for a different codebook size");
}

ErrorEstimate summarize(const GGrid& grid, const std::vector<std::int64_t>& counts, const SimOptions& opts) {
    ErrorEstimate est;
    est.trials = opts.trials;
    est.seed = opts.seed;
    std::size_t worst = 0;
    for (std::size_t k = 0; k < grid.points.size(); ++k) {
        GridEstimate ge;
        ge.g = grid.points[k];
        ge.events = counts[k];
        ge.p_hat = static_cast<double>(counts[k]) / static_cast<double>(opts.trials);
        ge.half_width = binomial_half_width(ge.p_hat, opts.trials);
        est.per_g.push_back(ge);
        if (counts[k] > counts[worst]) worst = k;
    }
    est.p_hat = est.per_g[worst].p_hat;
    est.half_width = est.per_g[worst].half_width;
    est.g_worst = est.per_g[worst].g;
    return est;
}

// Shared estimator body: counts, per grid point, trials whose decision equals
// `count_when`.
ErrorEstimate estimate(const Codebook& cb, std::int64_t i, const TargetSet& target, const ChannelParams& ch,
                       const GGrid& grid, const SimOptions& opts, bool count_when) {
    check_options(opts);
    require(!grid.points.empty(), "simulation: empty fading grid");
    const double tau = decoder_tau(cb, ch);
    const auto order = probe_order(cb, i, target);
    const double sd = std::sqrt(ch.sigma2 / static_cast<double>(cb.n));
    const Eigen::VectorXd ci = cb.codeword(i);
    auto counts = count_events(opts.trials, opts.threads, grid.points.size(), [&] {
        return [&, z = Eigen::VectorXd(cb.n), y = Eigen::VectorXd(cb.n)](std::int64_t t,
                                                                          std::vector<std::int64_t>& acc) mutable {
            Engine eng(derive_seed(opts.seed, kNoiseStream, static_cast<std::uint64_t>(t)));
            fill_standard_normal(eng, z);
            z *= sd;
            for (std::size_t k = 0; k < grid.points.size(); ++k) {
                const double g = grid.points[k];
                y.noalias() = g * ci + z;
                if (union_decision(y, cb, order, g, ch.sigma2, tau) == count_when) ++acc[k];
            }
        };
    });
    return summarize(grid, counts, opts);
}

}  // namespace

GGrid GGrid::uniform(double gamma, double g_max, std::int64_t count) {
    require(gamma >= 0.0 && g_max >= gamma, "fading grid: need 0 <= gamma <= g_max");
    require(count >= 1, "fading grid: need at least one point");
    GGrid grid;
    if (count == 1 || g_max == gamma) {
        grid.points = {gamma};
        return grid;
    }
    for (std::int64_t k = 0; k < count; ++k)
        grid.points.push_back(k + 1 == count ? g_max
                                             : gamma + (g_max - gamma) * static_cast<double>(k) / static_cast<double>(count - 1));
    return grid;
}

GGrid GGrid::from_points(std::vector<double> points, double gamma, double g_max) {
    for (double g : points) require(g >= gamma && g <= g_max, "fading grid: point outside [gamma, g_max]");
    points.push_back(gamma);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return GGrid{std::move(points)};
}

double binomial_half_width(double p, std::int64_t trials) {
    require(trials >= 1, "half width: trials must be >= 1");
    return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

TargetSet make_target(const Codebook& cb, std::int64_t i, std::int64_t K, bool include_i, TargetPolicy policy,
                      std::uint64_t seed) {
    const std::int64_t M = cb.size();
    if (i < 0 || i >= M) fail(ErrorKind::IndexOutOfRange, "make_target: message index out of range");
    const std::int64_t others = include_i ? K - 1 : K;
    require(K >= 1, "make_target: K must be >= 1");
    require(others <= M - 1, "make_target: K=" + std::to_string(K) + " too large for codebook of size " + std::to_string(M));

    std::vector<std::int64_t> pool;
    for (std::int64_t j = 0; j < M; ++j)
        if (j != i) pool.push_back(j);
    if (policy == TargetPolicy::Nearest) {
        std::vector<double> dist(M);
        for (std::int64_t j = 0; j < M; ++j) dist[j] = (cb.codeword(j) - cb.codeword(i)).squaredNorm();
        std::stable_sort(pool.begin(), pool.end(), [&](std::int64_t a, std::int64_t b) { return dist[a] < dist[b]; });
    } else {
        // Partial Fisher-Yates with the project engine, for a library-independent draw.
        Engine eng(derive_seed(seed, kTargetStream, static_cast<std::uint64_t>(i)));
        for (std::int64_t k = 0; k < others; ++k) {
            const auto span = static_cast<std::uint64_t>(pool.size() - k);
            const auto pick = k + static_cast<std::int64_t>(uniform01(eng) * static_cast<double>(span));
            std::swap(pool[k], pool[std::min<std::int64_t>(pick, pool.size() - 1)]);
        }
    }
    pool.resize(others);
    if (include_i) pool.push_back(i);
    return TargetSet(std::move(pool), M);
}

double decoder_tau(const Codebook& cb, const ChannelParams& ch) { return tau_from_theta(cb.theta, ch.gamma); }

ErrorEstimate estimate_type1(const Codebook& cb, std::int64_t i, const TargetSet& target, const ChannelParams& ch,
                             const GGrid& grid, const SimOptions& opts) {
    check_message(cb, i, target);
    require(target.contains(i), "type-I estimate: message " + std::to_string(i) + " is not in the target set");
    return estimate(cb, i, target, ch, grid, opts, false);
}

ErrorEstimate estimate_type2(const Codebook& cb, std::int64_t i, const TargetSet& target, const ChannelParams& ch,
                             const GGrid& grid, const SimOptions& opts) {
    check_message(cb, i, target);
    require(!target.contains(i), "type-II estimate: message " + std::to_string(i) + " is in the target set");
    return estimate(cb, i, target, ch, grid, opts, true);
}

std::vector<std::uint8_t> trial_decisions(const Codebook& cb, std::int64_t i, const TargetSet& target,
                                          const ChannelParams& ch, double g, const SimOptions& opts) {
    check_options(opts);
    check_message(cb, i, target);
    const double tau = decoder_tau(cb, ch);
    std::vector<std::uint8_t> out(opts.trials);
    for (std::int64_t t = 0; t < opts.trials; ++t) {
        const auto y = transmit(cb.codeword(i), g, ch, derive_seed(opts.seed, kNoiseStream, static_cast<std::uint64_t>(t))).y;
        out[t] = k_identify(y, cb, target, g, ch.sigma2, tau) ? 1 : 0;
    }
    return out;
}

PairEstimate degenerate_fading_experiment(const Codebook& cb, std::int64_t i1, std::int64_t i2, const TargetSet& target,
                                          const ChannelParams& ch, NoiseCoupling coupling, const SimOptions& opts) {
    check_options(opts);
    check_message(cb, i1, target);
    check_message(cb, i2, target);
    require(target.contains(i1), "degenerate experiment: i1 must be in the target set");
    require(!target.contains(i2), "degenerate experiment: i2 must not be in the target set");
    const double tau = decoder_tau(cb, ch);
    const double g = 0.0;
    const auto order1 = probe_order(cb, i1, target);
    const auto order2 = probe_order(cb, i2, target);
    const double sd = std::sqrt(ch.sigma2 / static_cast<double>(cb.n));
    const Eigen::VectorXd c1 = cb.codeword(i1);
    const Eigen::VectorXd c2 = cb.codeword(i2);
    const std::uint64_t second = coupling == NoiseCoupling::Shared ? kNoiseStream : kSecondNoiseStream;
    auto counts = count_events(opts.trials, opts.threads, 2, [&] {
        return [&, z = Eigen::VectorXd(cb.n), y = Eigen::VectorXd(cb.n)](std::int64_t t,
                                                                          std::vector<std::int64_t>& acc) mutable {
            Engine e1(derive_seed(opts.seed, kNoiseStream, static_cast<std::uint64_t>(t)));
            fill_standard_normal(e1, z);
            y.noalias() = g * c1 + sd * z;
            if (!union_decision(y, cb, order1, g, ch.sigma2, tau)) ++acc[0];
            Engine e2(derive_seed(opts.seed, second, static_cast<std::uint64_t>(t)));
            fill_standard_normal(e2, z);
            y.noalias() = g * c2 + sd * z;
            if (union_decision(y, cb, order2, g, ch.sigma2, tau)) ++acc[1];
        };
    });
    PairEstimate out;
    out.trials = opts.trials;
    out.p1 = static_cast<double>(counts[0]) / static_cast<double>(opts.trials);
    out.p2 = static_cast<double>(counts[1]) / static_cast<double>(opts.trials);
    out.hw1 = binomial_half_width(out.p1, opts.trials);
    out.hw2 = binomial_half_width(out.p2, opts.trials);
    return out;
}

std::vector<ConversePoint> converse_distance_experiment(const CodeParams& code, const ChannelParams& ch,
                                                        std::span<const double> distances, NoiseCoupling coupling,
                                                        const SimOptions& opts) {
    check_options(opts);
    validate(ch);
    const double theta_n = theta(code, ch);
    const double R = std::max(0.0, std::sqrt(ch.A) - std::sqrt(theta_n));
    const double tau = tau_from_theta(theta_n, ch.gamma);
    const double g = ch.gamma;
    const double sd = std::sqrt(ch.sigma2 / static_cast<double>(code.n));
    const std::uint64_t second = coupling == NoiseCoupling::Shared ? kNoiseStream : kSecondNoiseStream;

    std::vector<ConversePoint> curve;
    for (const double d : distances) {
        require(std::isfinite(d) && d >= 0.0, "converse experiment: distances must be >= 0");
        require(d <= 2.0 * R, "converse experiment: distance " + std::to_string(d) +
                                  " exceeds the inner-ball diameter " + std::to_string(2.0 * R));
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(code.n);
        Eigen::VectorXd c2 = Eigen::VectorXd::Zero(code.n);
        c1[0] = d / 2.0;
        c2[0] = -d / 2.0;
        auto counts = count_events(opts.trials, opts.threads, 2, [&] {
            return [&, z = Eigen::VectorXd(code.n), y = Eigen::VectorXd(code.n)](std::int64_t t,
                                                                                 std::vector<std::int64_t>& acc) mutable {
                Engine e1(derive_seed(opts.seed, kNoiseStream, static_cast<std::uint64_t>(t)));
                fill_standard_normal(e1, z);
                y.noalias() = g * c1 + sd * z;
                if (!in_territory(y, c1, g, ch.sigma2, tau)) ++acc[0];
                Engine e2(derive_seed(opts.seed, second, static_cast<std::uint64_t>(t)));
                fill_standard_normal(e2, z);
                y.noalias() = g * c2 + sd * z;
                if (in_territory(y, c1, g, ch.sigma2, tau)) ++acc[1];
            };
        });
        ConversePoint pt;
        pt.d = d;
        pt.est.trials = opts.trials;
        pt.est.p1 = static_cast<double>(counts[0]) / static_cast<double>(opts.trials);
        pt.est.p2 = static_cast<double>(counts[1]) / static_cast<double>(opts.trials);
        pt.est.hw1 = binomial_half_width(pt.est.p1, opts.trials);
        pt.est.hw2 = binomial_half_width(pt.est.p2, opts.trials);
        curve.push_back(pt);
    }
    return curve;
}

std::vector<SweepRow> scaling_sweep(std::span<const std::int64_t> n_list, const CodeParams& code_template,
                                    const ChannelParams& ch, std::uint64_t seed, const PackingOptions& opts) {
    std::vector<SweepRow> rows;
    for (const std::int64_t n : n_list) {
        CodeParams code = code_template;
        code.n = n;
        validate(code);
        const Codebook cb = build_codebook(code, ch, seed, opts);
        const double nlogn = static_cast<double>(n) * std::log2(static_cast<double>(n));
        SweepRow row;
        row.n = n;
        row.kappa = code.kappa;
        row.b = code.b;
        row.theta = cb.theta;
        row.M = cb.size();
        row.log2M = std::log2(static_cast<double>(row.M));
        row.rate_ratio = row.log2M / nlogn;
        row.converse_ratio = converse_log_codebook(code, ch) / nlogn;
        row.achievable_ratio = achievable_log_codebook(code, ch) / nlogn;
        row.log2_cap = log2_volume_ratio_cap(cb);
        row.within_converse = row.rate_ratio <= row.converse_ratio;
        row.within_cap = row.log2M <= row.log2_cap;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace dki
