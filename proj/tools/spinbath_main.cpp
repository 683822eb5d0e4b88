#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spinbath/cli.hpp"
#include "spinbath/config.hpp"
#include "spinbath/version.hpp"

// Batch front end. Grammar:
//   spinbath <nsd|predict|fit|simulate|geometry> --config <path>
//            [--data <dir>] [--out <dir>] [--seed <u64>]
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical/fit error.

int main(int argc, char** argv) {
    CLI::App app{"surface spin-bath noise model and relaxometry toolkit"};
    app.set_version_flag("--version", std::string(spinbath::tool_version));
    app.require_subcommand(1);

    std::string config_path;
    std::string data_dir;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;

    const char* names[] = {"nsd", "predict", "fit", "simulate", "geometry"};
    const char* descs[] = {
        "tabulate the Lorentzian noise spectral density",
        "predict T1/T2 from bath and sensor parameters",
        "fit decay curves, extract bath parameters, fit rate models",
        "run the Ornstein-Uhlenbeck ensemble simulator",
        "sensing-volume and dipolar field estimates",
    };
    for (int i = 0; i < 5; ++i) {
        auto* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--data", data_dir, "directory of input CSV curves");
        sub->add_option("--out", out_dir, "output directory (default: current)");
        sub->add_option("--seed", seed, "RNG seed override")->each([&](const std::string&) {
            seed_given = true;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        // Help/version exit with 0; anything else is a usage problem.
        return rc == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();

    spinbath::cli::Context ctx;
    try {
        ctx.cfg = spinbath::config::load_config(config_path);
    } catch (const spinbath::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    ctx.out_dir = out_dir;
    if (!data_dir.empty()) ctx.data_dir = data_dir;
    ctx.seed = seed_given ? seed : ctx.cfg.seed;

    return spinbath::cli::run_guarded(command, ctx);
}
