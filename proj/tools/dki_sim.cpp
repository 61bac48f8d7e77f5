// dki_sim: bounds, codebook construction and Monte Carlo experiments for
// deterministic K-identification over slow-fading Gaussian channels.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dki/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Deterministic K-identification simulator"};
    app.require_subcommand(1);

    dki::cli::RunOptions opts;
    std::uint64_t seed = 0;
    std::int64_t trials = 0;
    unsigned threads = 0;

    const char* env_threads = std::getenv("DKI_SIM_THREADS");
    if (env_threads) opts.threads = static_cast<unsigned>(std::max(1L, std::strtol(env_threads, nullptr, 10)));

    std::string chosen;
    for (const char* name : {"bounds", "build", "simulate", "sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", opts.config_path, "Configuration file (key = value lines)")->required();
        sub->add_option("--seed", seed, "Master seed, overrides the config 'seed'");
        sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--trials", trials, "Monte Carlo trials, overrides simulate.trials")->check(CLI::PositiveNumber);
        sub->add_option("--threads", threads, "Worker threads (fallback: DKI_SIM_THREADS)")->check(CLI::PositiveNumber);
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    auto* sub = app.get_subcommand(chosen);
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--trials")) opts.trials = trials;
    if (sub->count("--threads")) opts.threads = threads;

    return dki::cli::run(chosen, opts, std::cout, std::cerr);
}
