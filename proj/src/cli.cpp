#include "dki/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "dki/bounds.hpp"
#include "dki/channel.hpp"
#include "dki/config.hpp"
#include "dki/csv.hpp"
#include "dki/montecarlo.hpp"
#include "dki/packing.hpp"

namespace dki::cli {

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter: return kInvalidParameter;
        case ErrorKind::DimensionTooLarge: return kDimensionTooLarge;
        case ErrorKind::IndexOutOfRange: return kIndexOutOfRange;
        case ErrorKind::InvalidModel: return kInvalidModel;
        case ErrorKind::ConfigParse: return kConfigParse;
        case ErrorKind::Io: return kIoError;
    }
    return kValidationFailed;
}

namespace {

namespace fs = std::filesystem;

const std::set<std::string> kKnownKeys = {
    "seed",
    "code.n", "code.kappa", "code.b",
    "channel.A", "channel.sigma2", "channel.gamma", "channel.g_max",
    "fading.kind", "fading.scale",
    "packing.method", "packing.saturation_T", "packing.max_codewords", "packing.theta", "packing.axis_count",
    "build.coverage_samples",
    "bounds.n_list", "bounds.kappa_list",
    "simulate.codebook", "simulate.experiments", "simulate.trials", "simulate.message", "simulate.type2_message",
    "simulate.target", "simulate.target_policy", "simulate.ggrid", "simulate.ggrid_points", "simulate.distances",
    "simulate.distance_points",
    "sweep.n_list", "sweep.kappa_list",
};

// Files are staged in memory and written together; a failed write removes
// everything this run created.
class OutputSet {
public:
    void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }

    void commit(const std::string& dir) {
        std::vector<fs::path> written;
        try {
            fs::create_directories(dir);
            for (const auto& [name, content] : files_) {
                const fs::path final_path = fs::path(dir) / name;
                const fs::path tmp = fs::path(dir) / (name + ".partial");
                written.push_back(tmp);
                {
                    std::ofstream os(tmp, std::ios::binary);
                    if (!os) fail(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
                    os << content;
                    if (!os.flush()) fail(ErrorKind::Io, "write to '" + tmp.string() + "' failed");
                }
                fs::rename(tmp, final_path);
                written.back() = final_path;
            }
        } catch (const fs::filesystem_error& e) {
            cleanup(written);
            fail(ErrorKind::Io, e.what());
        } catch (...) {
            cleanup(written);
            throw;
        }
    }

private:
    static void cleanup(const std::vector<fs::path>& paths) {
        std::error_code ec;
        for (const auto& p : paths) fs::remove(p, ec);
    }

    std::vector<std::pair<std::string, std::string>> files_;
};

CodeParams read_code(Config& cfg, bool need_n) {
    CodeParams code;
    code.n = need_n ? cfg.require_int("code.n") : 2;
    code.kappa = cfg.require_double("code.kappa");
    code.b = cfg.require_double("code.b");
    if (need_n) validate(code);
    return code;
}

ChannelParams read_channel(Config& cfg) {
    ChannelParams ch;
    ch.A = cfg.require_double("channel.A");
    ch.sigma2 = cfg.require_double("channel.sigma2");
    ch.gamma = cfg.require_double("channel.gamma");
    ch.g_max = cfg.get_double("channel.g_max", ch.gamma);
    validate(ch);
    return ch;
}

FadingModel read_fading(Config& cfg, const ChannelParams& ch) {
    FadingModel model;
    model.kind = parse_fading_kind(cfg.get_string("fading.kind", ch.g_max > ch.gamma ? "uniform-interval" : "constant"));
    model.gamma = ch.gamma;
    model.g_max = ch.g_max;
    model.scale = cfg.get_double("fading.scale", 1.0);
    if (model.kind == FadingKind::DegenerateZero)
        fail(ErrorKind::InvalidModel, "fading.kind = degenerate-zero is only used inside the zero-fading experiment");
    validate(model);
    return model;
}

PackingOptions read_packing(Config& cfg) {
    PackingOptions opts;
    opts.saturation_T = cfg.get_int("packing.saturation_T", opts.saturation_T);
    opts.max_codewords = cfg.get_int("packing.max_codewords", opts.max_codewords);
    opts.theta_override = cfg.get_optional_double("packing.theta");
    return opts;
}

Codebook construct_codebook(Config& cfg, const CodeParams& code, const ChannelParams& ch, std::uint64_t seed) {
    const std::string method = cfg.get_string("packing.method", "greedy");
    const PackingOptions popts = read_packing(cfg);
    if (method == "greedy") return build_codebook(code, ch, seed, popts);
    if (method == "axis") return axis_codebook(code, ch, cfg.get_int("packing.axis_count", 2), popts.theta_override);
    fail(ErrorKind::ConfigParse, "packing.method must be 'greedy' or 'axis', got '" + method + "'");
}

std::uint64_t read_seed(Config& cfg, const RunOptions& opts) {
    if (opts.seed) cfg.set("seed", std::to_string(*opts.seed));
    return cfg.get_uint("seed", 1);
}

// ---------------------------------------------------------------------------

int cmd_bounds(Config& cfg, const RunOptions& opts, std::ostream& out, OutputSet& files) {
    (void)opts;
    const CodeParams base = read_code(cfg, false);
    const ChannelParams ch = read_channel(cfg);
    std::vector<std::int64_t> n_list;
    if (cfg.has("bounds.n_list"))
        n_list = cfg.get_int_list("bounds.n_list", {});
    else
        n_list = {cfg.require_int("code.n")};
    const std::vector<double> kappas = cfg.get_double_list("bounds.kappa_list", {base.kappa});

    CsvTable table({"n", "kappa", "b", "A", "sigma2", "gamma", "theta", "tau", "K", "rate_lower", "rate_upper",
                    "log2M_lower", "log2M_upper", "min_dist_converse", "type1_bound", "type2_bound", "zeta0", "zeta1"});
    for (const std::int64_t n : n_list) {
        for (const double kappa : kappas) {
            CodeParams code{n, kappa, base.b};
            validate(code);
            const BoundReport r = bound_report(code, ch);
            const TypeTwoComponents z = type2_components(code, ch);
            CsvTable::Row row;
            row << n << kappa << code.b << ch.A << ch.sigma2 << ch.gamma << r.theta_n << r.tau_n << r.K << r.rate_lower
                << r.rate_upper << r.log2M_lower << r.log2M_upper << r.min_dist_converse << r.type1_bound << r.type2_bound
                << z.zeta0 << z.zeta1;
            table.add_row(row);
            out << "n=" << n << " kappa=" << format_double(kappa) << " b=" << format_double(code.b) << '\n'
                << "  theta_n           = " << format_double(r.theta_n) << '\n'
                << "  tau_n             = " << format_double(r.tau_n) << '\n'
                << "  K                 = " << r.K << '\n'
                << "  rate bounds       = [" << format_double(r.rate_lower) << ", " << format_double(r.rate_upper) << "]\n"
                << "  log2 M bounds     = [" << format_double(r.log2M_lower) << ", " << format_double(r.log2M_upper) << "]\n"
                << "  min distance      = " << format_double(r.min_dist_converse) << '\n'
                << "  type I bound      = " << format_double(r.type1_bound) << '\n'
                << "  type II bound     = " << format_double(r.type2_bound) << '\n';
        }
    }
    table.add_comments(cfg.effective_lines());
    files.add("bounds.csv", table.render());
    return kOk;
}

int cmd_build(Config& cfg, const RunOptions& opts, std::ostream& out, OutputSet& files) {
    const std::uint64_t seed = read_seed(cfg, opts);
    const CodeParams code = read_code(cfg, true);
    const ChannelParams ch = read_channel(cfg);
    const Codebook cb = construct_codebook(cfg, code, ch, seed);
    const std::int64_t samples = cfg.get_int("build.coverage_samples", 10000);
    require(samples >= 1, "build.coverage_samples must be >= 1");

    const ValidationReport rep = validate_codebook(cb, ch);
    const double coverage = coverage_certificate(cb, samples, seed);
    const double log2M = std::log2(static_cast<double>(cb.size()));

    CsvTable table({"n", "M", "theta", "r0", "R_inner", "max_norm", "min_distance", "two_r0", "power_ok", "distance_ok",
                    "log2M", "log2_cap", "log2_density", "log2_density_upper", "coverage", "coverage_samples",
                    "saturation_rejections"});
    CsvTable::Row row;
    row << cb.n << static_cast<std::int64_t>(cb.size()) << cb.theta << cb.r0 << cb.R_inner << rep.max_norm
        << rep.min_distance << rep.two_r0 << rep.power_ok << rep.distance_ok << log2M << log2_volume_ratio_cap(cb)
        << log2_packing_density(cb) << packing_density_bounds(cb.n).second << coverage << samples
        << cb.saturation_rejections;
    table.add_row(row);
    table.add_comments(cfg.effective_lines());

    std::ostringstream cbtext;
    write_codebook(cbtext, cb);
    files.add("codebook.txt", cbtext.str());
    files.add("validation.csv", table.render());

    out << "built codebook: n=" << cb.n << " M=" << cb.size() << " r0=" << format_double(cb.r0)
        << " R_inner=" << format_double(cb.R_inner) << '\n'
        << "  power check    " << (rep.power_ok ? "ok" : "FAILED") << " (max norm " << format_double(rep.max_norm) << ")\n"
        << "  distance check " << (rep.distance_ok ? "ok" : "FAILED") << " (min distance " << format_double(rep.min_distance)
        << ")\n"
        << "  coverage       " << format_double(coverage) << '\n';
    return rep.passed() ? kOk : kValidationFailed;
}

CsvTable estimate_table(const ErrorEstimate& est, std::int64_t message, const TargetSet& target, double bound) {
    CsvTable table({"message", "K", "g", "events", "trials", "p_hat", "half_width", "worst", "analytic_bound"});
    for (const auto& ge : est.per_g) {
        CsvTable::Row row;
        row << message << target.K() << ge.g << ge.events << est.trials << ge.p_hat << ge.half_width
            << (ge.g == est.g_worst) << bound;
        table.add_row(row);
    }
    return table;
}

int cmd_simulate(Config& cfg, const RunOptions& opts, std::ostream& out, OutputSet& files) {
    const std::uint64_t seed = read_seed(cfg, opts);
    const CodeParams code = read_code(cfg, true);
    const ChannelParams ch = read_channel(cfg);
    const FadingModel fading = read_fading(cfg, ch);
    if (opts.trials) cfg.set("simulate.trials", std::to_string(*opts.trials));
    SimOptions sim;
    sim.trials = cfg.get_int("simulate.trials", 10000);
    sim.seed = seed;
    sim.threads = opts.threads;
    require(sim.trials >= 1, "simulate.trials must be >= 1");

    const std::string cb_path = cfg.get_string("simulate.codebook", "");
    const Codebook cb = cb_path.empty() ? construct_codebook(cfg, code, ch, seed) : load_codebook(cb_path);
    if (cb.n != code.n) fail(ErrorKind::InvalidParameter, "codebook dimension does not match code.n");
    const ValidationReport rep = validate_codebook(cb, ch);
    if (!rep.passed()) {
        out << "codebook failed validation (power " << rep.power_ok << ", distance " << rep.distance_ok << ")\n";
        return kValidationFailed;
    }

    const std::vector<std::string> experiments =
        cfg.get_string_list("simulate.experiments", {"type1", "type2", "degenerate", "converse"});
    const std::int64_t message = cfg.get_int("simulate.message", 0);
    const std::int64_t type2_message = cfg.get_int("simulate.type2_message", message);
    const std::string policy_name = cfg.get_string("simulate.target_policy", "nearest");
    if (policy_name != "nearest" && policy_name != "random")
        fail(ErrorKind::ConfigParse, "simulate.target_policy must be 'nearest' or 'random'");
    const TargetPolicy policy = policy_name == "nearest" ? TargetPolicy::Nearest : TargetPolicy::Random;
    const std::vector<std::int64_t> explicit_target = cfg.get_int_list("simulate.target", {});

    GGrid grid;
    if (cfg.has("simulate.ggrid"))
        grid = GGrid::from_points(cfg.get_double_list("simulate.ggrid", {}), fading.gamma, fading.g_max);
    else
        grid = GGrid::uniform(fading.gamma, fading.g_max,
                              fading.kind == FadingKind::Constant ? 1 : cfg.get_int("simulate.ggrid_points", 5));

    const std::int64_t K_code = target_set_size(cb.n, code.kappa);
    const std::int64_t M = cb.size();
    auto target_for = [&](std::int64_t i, bool include_i) {
        if (!explicit_target.empty()) return TargetSet(explicit_target, M);
        const std::int64_t K = std::min(K_code, include_i ? M : M - 1);
        return make_target(cb, i, K, include_i, policy, seed);
    };

    for (const auto& exp : experiments) {
        if (exp == "type1") {
            const TargetSet target = target_for(message, true);
            const ErrorEstimate est = estimate_type1(cb, message, target, ch, grid, sim);
            CsvTable table = estimate_table(est, message, target, type1_error_bound(code, ch));
            table.add_comments(cfg.effective_lines());
            files.add("type1.csv", table.render());
            out << "type I : p_hat=" << format_double(est.p_hat) << " +- " << format_double(est.half_width)
                << " at g=" << format_double(est.g_worst) << '\n';
        } else if (exp == "type2") {
            if (M < 2) fail(ErrorKind::InvalidParameter, "type-II experiment needs a codebook with M >= 2");
            const TargetSet target = target_for(type2_message, false);
            const ErrorEstimate est = estimate_type2(cb, type2_message, target, ch, grid, sim);
            CsvTable table = estimate_table(est, type2_message, target, type2_error_bound(code, ch));
            table.add_comments(cfg.effective_lines());
            files.add("type2.csv", table.render());
            out << "type II: p_hat=" << format_double(est.p_hat) << " +- " << format_double(est.half_width)
                << " at g=" << format_double(est.g_worst) << '\n';
        } else if (exp == "degenerate") {
            if (M < 2) fail(ErrorKind::InvalidParameter, "zero-fading experiment needs a codebook with M >= 2");
            const TargetSet target = target_for(message, true);
            std::int64_t i2 = -1;
            for (std::int64_t j = 0; j < M && i2 < 0; ++j)
                if (!target.contains(j)) i2 = j;
            if (i2 < 0) fail(ErrorKind::InvalidParameter, "zero-fading experiment needs a message outside the target set");
            CsvTable table({"coupling", "i1", "i2", "K", "trials", "p1", "p2", "sum", "hw1", "hw2"});
            for (const auto coupling : {NoiseCoupling::Shared, NoiseCoupling::Independent}) {
                const PairEstimate pe = degenerate_fading_experiment(cb, message, i2, target, ch, coupling, sim);
                CsvTable::Row row;
                row << (coupling == NoiseCoupling::Shared ? "shared" : "independent") << message << i2 << target.K()
                    << pe.trials << pe.p1 << pe.p2 << pe.sum() << pe.hw1 << pe.hw2;
                table.add_row(row);
                out << "g=0 (" << (coupling == NoiseCoupling::Shared ? "shared" : "independent")
                    << "): p1+p2=" << format_double(pe.sum()) << '\n';
            }
            table.add_comments(cfg.effective_lines());
            files.add("degenerate.csv", table.render());
        } else if (exp == "converse") {
            const double tau_n = tau(code, ch);
            const double R = std::max(0.0, std::sqrt(ch.A) - std::sqrt(theta(code, ch)));
            const double d_max = std::min(2.0 * std::sqrt(ch.sigma2 + tau_n) / ch.gamma, 2.0 * R);
            std::vector<double> defaults;
            if (!cfg.has("simulate.distances")) {
                const std::int64_t points = cfg.get_int("simulate.distance_points", 5);
                require(points >= 1, "simulate.distance_points must be >= 1");
                for (std::int64_t k = 0; k < points; ++k)
                    defaults.push_back(points == 1 ? 0.0 : d_max * static_cast<double>(k) / static_cast<double>(points - 1));
            }
            const std::vector<double> distances = cfg.get_double_list("simulate.distances", defaults);
            const auto curve = converse_distance_experiment(code, ch, distances, NoiseCoupling::Shared, sim);
            CsvTable table({"d", "trials", "p1", "p2", "sum", "hw1", "hw2", "converse_min_distance"});
            const double alpha = converse_min_distance(code, ch);
            for (const auto& pt : curve) {
                CsvTable::Row row;
                row << pt.d << pt.est.trials << pt.est.p1 << pt.est.p2 << pt.est.sum() << pt.est.hw1 << pt.est.hw2 << alpha;
                table.add_row(row);
            }
            table.add_comments(cfg.effective_lines());
            files.add("converse.csv", table.render());
            out << "converse curve: " << curve.size() << " distances\n";
        } else {
            fail(ErrorKind::ConfigParse, "unknown experiment '" + exp + "' in simulate.experiments");
        }
    }
    return kOk;
}

int cmd_sweep(Config& cfg, const RunOptions& opts, std::ostream& out, OutputSet& files) {
    const std::uint64_t seed = read_seed(cfg, opts);
    const CodeParams base = read_code(cfg, false);
    const ChannelParams ch = read_channel(cfg);
    const PackingOptions popts = read_packing(cfg);
    const std::vector<std::int64_t> n_list = cfg.get_int_list("sweep.n_list", {4, 6, 8, 10, 12});
    const std::vector<double> kappas = cfg.get_double_list("sweep.kappa_list", {base.kappa});

    CsvTable table({"n", "kappa", "b", "theta", "M", "log2M", "rate_ratio", "converse_ratio", "achievable_ratio",
                    "log2_cap", "within_converse", "within_cap"});
    bool all_ok = true;
    for (const double kappa : kappas) {
        CodeParams tmpl = base;
        tmpl.kappa = kappa;
        for (const auto& r : scaling_sweep(n_list, tmpl, ch, seed, popts)) {
            CsvTable::Row row;
            row << r.n << r.kappa << r.b << r.theta << r.M << r.log2M << r.rate_ratio << r.converse_ratio
                << r.achievable_ratio << r.log2_cap << r.within_converse << r.within_cap;
            table.add_row(row);
            all_ok = all_ok && r.within_converse && r.within_cap;
            out << "n=" << r.n << " kappa=" << format_double(r.kappa) << " M=" << r.M
                << " ratio=" << format_double(r.rate_ratio) << " converse=" << format_double(r.converse_ratio)
                << (r.within_converse ? "" : "  VIOLATION") << '\n';
        }
    }
    table.add_comments(cfg.effective_lines());
    files.add("sweep.csv", table.render());
    return all_ok ? kOk : kValidationFailed;
}

}  // namespace

int run(const std::string& subcommand, const RunOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        Config cfg = opts.config_text ? Config::parse(*opts.config_text, "<inline>") : Config::load(opts.config_path);
        cfg.check_keys(kKnownKeys);
        OutputSet files;
        int code = kOk;
        if (subcommand == "bounds")
            code = cmd_bounds(cfg, opts, out, files);
        else if (subcommand == "build")
            code = cmd_build(cfg, opts, out, files);
        else if (subcommand == "simulate")
            code = cmd_simulate(cfg, opts, out, files);
        else if (subcommand == "sweep")
            code = cmd_sweep(cfg, opts, out, files);
        else
            fail(ErrorKind::ConfigParse, "unknown subcommand '" + subcommand + "'");
        files.commit(opts.out_dir);
        return code;
    } catch (const Error& e) {
        err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
        return exit_code(e.kind());
    }
}

}  // namespace dki::cli
