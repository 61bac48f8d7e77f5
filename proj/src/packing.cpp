#include "dki/packing.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "dki/csv.hpp"
#include "dki/error.hpp"
#include "dki/rng.hpp"

namespace dki {

namespace {

constexpr std::uint64_t kPackingStream = 0x7061636bULL;   // "pack"
constexpr std::uint64_t kCoverageStream = 0x636f7672ULL;  // "covr"

// Squared distance between two contiguous n-vectors.
double squared_distance(const double* a, const double* b, std::int64_t n) {
    double s = 0.0;
    for (std::int64_t t = 0; t < n; ++t) {
        const double d = a[t] - b[t];
        s += d * d;
    }
    return s;
}

// Non-overlap predicate shared by construction and exact validation.
bool separated(double sq_dist, double r0) { return sq_dist >= 4.0 * r0 * r0; }
bool inside_inner(double norm, double R_inner) { return norm <= R_inner; }

double resolve_theta(const CodeParams& code, const ChannelParams& ch, std::optional<double> override_theta) {
    if (!override_theta) return theta(code, ch);
    validate(code);
    require(*override_theta > 0.0 && *override_theta <= ch.A, "packing: forced theta must lie in (0, A]");
    return *override_theta;
}

}  // namespace

Codebook make_codebook(const CodeParams& code, double A, double theta_n, std::uint64_t seed,
                       Eigen::MatrixXd codewords) {
    require(A > 0.0, "codebook: A must be > 0");
    require(theta_n > 0.0 && theta_n <= A, "codebook: theta must lie in (0, A]");
    require(codewords.rows() == code.n, "codebook: codeword length does not match n");
    require(codewords.cols() >= 1, "codebook: M must be >= 1");
    Codebook cb;
    cb.n = code.n;
    cb.A = A;
    cb.kappa = code.kappa;
    cb.b = code.b;
    cb.theta = theta_n;
    cb.r0 = std::sqrt(theta_n);
    cb.R_inner = std::max(0.0, std::sqrt(A) - cb.r0);
    cb.seed = seed;
    cb.codewords = std::move(codewords);
    return cb;
}

Codebook build_codebook(const CodeParams& code, const ChannelParams& ch, std::uint64_t seed,
                        const PackingOptions& opts) {
    validate(ch);
    require(opts.saturation_T >= 1, "packing: saturation_T must be >= 1");
    require(opts.max_codewords >= 1, "packing: max_codewords must be >= 1");
    const double theta_n = resolve_theta(code, ch, opts.theta_override);
    const std::int64_t n = code.n;
    const double r0 = std::sqrt(theta_n);
    const double R = std::max(0.0, std::sqrt(ch.A) - r0);

    // A saturated packing holds at least 2^{-n} (R / r0)^n centres.
    if (R > r0) {
        const double log2_projected = static_cast<double>(n) * (std::log2(R / r0) - 1.0);
        if (log2_projected > std::log2(static_cast<double>(opts.max_codewords)))
            fail(ErrorKind::DimensionTooLarge,
                 "packing: projected codebook size 2^" + format_double(log2_projected) + " exceeds max_codewords=" +
                     std::to_string(opts.max_codewords));
    }

    Engine eng(derive_seed(seed, kPackingStream, 0));
    std::vector<double> centres;
    std::int64_t M = 0;
    std::int64_t rejections = 0;
    while (rejections < opts.saturation_T) {
        Eigen::VectorXd x = uniform_in_ball(eng, n, R);
        if (!inside_inner(x.norm(), R)) continue;  // rounding past the boundary; resample
        bool ok = true;
        for (std::int64_t j = 0; j < M && ok; ++j)
            ok = separated(squared_distance(x.data(), centres.data() + j * n, n), r0);
        if (!ok) {
            ++rejections;
            continue;
        }
        if (M + 1 > opts.max_codewords)
            fail(ErrorKind::DimensionTooLarge,
                 "packing: codebook exceeded max_codewords=" + std::to_string(opts.max_codewords));
        centres.insert(centres.end(), x.data(), x.data() + n);
        ++M;
        rejections = 0;
    }

    Eigen::MatrixXd words = Eigen::Map<const Eigen::MatrixXd>(centres.data(), n, M);
    Codebook cb = make_codebook(code, ch.A, theta_n, seed, std::move(words));
    cb.saturation_rejections = rejections;
    return cb;
}

Codebook axis_codebook(const CodeParams& code, const ChannelParams& ch, std::int64_t count,
                       std::optional<double> theta_override) {
    validate(ch);
    const double theta_n = resolve_theta(code, ch, theta_override);
    require(count >= 1, "axis codebook: count must be >= 1");
    require(count <= 2 * code.n, "axis codebook: count must be <= 2n");
    const double R = std::max(0.0, std::sqrt(ch.A) - std::sqrt(theta_n));
    Eigen::MatrixXd words = Eigen::MatrixXd::Zero(code.n, count);
    for (std::int64_t i = 0; i < count; ++i) words(i / 2, i) = (i % 2 == 0) ? R : -R;
    return make_codebook(code, ch.A, theta_n, 0, std::move(words));
}

ValidationReport validate_codebook(const Codebook& cb, const ChannelParams& ch, double slack) {
    ValidationReport rep;
    rep.M = cb.size();
    rep.R_inner = cb.R_inner;
    rep.two_r0 = 2.0 * cb.r0;
    rep.sqrt_A = std::sqrt(ch.A);
    rep.max_norm = rep.M > 0 ? cb.codewords.colwise().norm().maxCoeff() : 0.0;
    double min_sq = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rep.M; ++i)
        for (Eigen::Index j = i + 1; j < rep.M; ++j)
            min_sq = std::min(min_sq, (cb.codeword(i) - cb.codeword(j)).squaredNorm());
    rep.min_distance = std::sqrt(min_sq);
    rep.power_ok = rep.max_norm <= rep.R_inner + slack;
    rep.distance_ok = rep.min_distance >= rep.two_r0 - slack;
    return rep;
}

bool satisfies_packing_exactly(const Codebook& cb) {
    const std::int64_t M = cb.size();
    if (M < 1) return false;
    for (Eigen::Index i = 0; i < M; ++i) {
        if (!inside_inner(cb.codeword(i).norm(), cb.R_inner)) return false;
        for (Eigen::Index j = i + 1; j < M; ++j)
            if (!separated(squared_distance(cb.codeword(i).data(), cb.codeword(j).data(), cb.n), cb.r0))
                return false;
    }
    return true;
}

double coverage_certificate(const Codebook& cb, std::int64_t samples, std::uint64_t seed) {
    require(samples >= 1, "coverage: samples must be >= 1");
    Engine eng(derive_seed(seed, kCoverageStream, 0));
    const double reach_sq = 4.0 * cb.r0 * cb.r0;
    std::int64_t covered = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        const Eigen::VectorXd x = uniform_in_ball(eng, cb.n, cb.R_inner);
        for (Eigen::Index j = 0; j < cb.size(); ++j) {
            if (squared_distance(x.data(), cb.codeword(j).data(), cb.n) <= reach_sq) {
                ++covered;
                break;
            }
        }
    }
    return static_cast<double>(covered) / static_cast<double>(samples);
}

double log2_volume_ratio_cap(const Codebook& cb) {
    return sphere_log_volume(cb.n, cb.R_inner + cb.r0) - sphere_log_volume(cb.n, cb.r0);
}

double log2_packing_density(const Codebook& cb) {
    return std::log2(static_cast<double>(cb.size())) - log2_volume_ratio_cap(cb);
}

void write_codebook(std::ostream& os, const Codebook& cb) {
    os << "n=" << cb.n << '\n'
       << "A=" << format_double(cb.A) << '\n'
       << "kappa=" << format_double(cb.kappa) << '\n'
       << "b=" << format_double(cb.b) << '\n'
       << "theta=" << format_double(cb.theta) << '\n'
       << "seed=" << cb.seed << '\n'
       << "M=" << cb.size() << '\n';
    for (Eigen::Index i = 0; i < cb.size(); ++i) {
        for (Eigen::Index t = 0; t < cb.n; ++t) os << (t ? " " : "") << format_double(cb.codewords(t, i));
        os << '\n';
    }
}

namespace {

template <typename T>
T parse_number(std::string_view text, const std::string& what) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) fail(ErrorKind::Io, "codebook file: cannot parse " + what + " '" + std::string(text) + "'");
    return value;
}

std::string header_value(std::istream& is, const std::string& key) {
    std::string line;
    if (!std::getline(is, line)) fail(ErrorKind::Io, "codebook file: missing header line '" + key + "='");
    const std::string prefix = key + "=";
    if (line.rfind(prefix, 0) != 0)
        fail(ErrorKind::Io, "codebook file: expected '" + prefix + "', got '" + line + "'");
    return line.substr(prefix.size());
}

}  // namespace

Codebook read_codebook(std::istream& is) {
    CodeParams code;
    code.n = parse_number<std::int64_t>(header_value(is, "n"), "n");
    const double A = parse_number<double>(header_value(is, "A"), "A");
    code.kappa = parse_number<double>(header_value(is, "kappa"), "kappa");
    code.b = parse_number<double>(header_value(is, "b"), "b");
    const double theta_n = parse_number<double>(header_value(is, "theta"), "theta");
    const auto seed = parse_number<std::uint64_t>(header_value(is, "seed"), "seed");
    const auto M = parse_number<std::int64_t>(header_value(is, "M"), "M");
    if (code.n < 1 || M < 1) fail(ErrorKind::Io, "codebook file: n and M must be >= 1");

    Eigen::MatrixXd words(code.n, M);
    std::string line;
    for (std::int64_t i = 0; i < M; ++i) {
        if (!std::getline(is, line)) fail(ErrorKind::Io, "codebook file: expected " + std::to_string(M) + " codewords");
        std::istringstream ls(line);
        std::string tok;
        std::int64_t t = 0;
        while (ls >> tok) {
            if (t >= code.n) fail(ErrorKind::Io, "codebook file: codeword " + std::to_string(i) + " too long");
            words(t++, i) = parse_number<double>(tok, "coordinate");
        }
        if (t != code.n) fail(ErrorKind::Io, "codebook file: codeword " + std::to_string(i) + " too short");
    }
    return make_codebook(code, A, theta_n, seed, std::move(words));
}

void save_codebook(const std::string& path, const Codebook& cb) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
    write_codebook(os, cb);
    if (!os) fail(ErrorKind::Io, "write to '" + path + "' failed");
}

Codebook load_codebook(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(ErrorKind::Io, "cannot open '" + path + "'");
    return read_codebook(is);
}

}  // namespace dki
