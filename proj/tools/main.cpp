// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <iostream>

#include "../src/cli/commands.hpp"
#include "../src/cli/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"C-R region characterization for a MIMO sensing-and-communication link"};
    app.require_subcommand(1);

    std::string config_path;
    int scenario = -1;
    long seed = -1;
    int points = -1;
    std::string out_dir;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--scenario", scenario, "override sweep.scenario (1..4, 0 = all)");
        sub->add_option("--seed", seed, "override system.seed");
        sub->add_option("--points", points, "override sweep.points");
        sub->add_option("--out", out_dir, "override output.dir");
    };

    auto* corner = app.add_subcommand("corner", "corner points of every C-R region");
    auto* boundary = app.add_subcommand("boundary", "Pareto boundary sweep plus benchmarks");
    auto* snr = app.add_subcommand("rate-vs-snr", "rate against SNR at a fixed CRB bound");
    auto* palloc = app.add_subcommand("power-alloc", "per-subchannel power allocations");
    auto* ocheck = app.add_subcommand("oracle-check", "solver against brute-force oracles");
    for (auto* sub : {corner, boundary, snr, palloc, ocheck}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        crr::cli::RunConfig cfg = crr::cli::load_config(config_path);
        if (scenario >= 0) {
            if (scenario > 4) throw crr::cli::ConfigError(0, "--scenario must be 0..4");
            cfg.scenario = scenario;
        }
        if (seed >= 0) cfg.system.seed = static_cast<std::uint64_t>(seed);
        if (points >= 0) cfg.sweep_points = points;
        if (!out_dir.empty()) cfg.out_dir = out_dir;

        if (corner->parsed()) return crr::cli::cmd_corner(cfg);
        if (boundary->parsed()) return crr::cli::cmd_boundary(cfg);
        if (snr->parsed()) return crr::cli::cmd_rate_vs_snr(cfg);
        if (palloc->parsed()) return crr::cli::cmd_power_alloc(cfg);
        if (ocheck->parsed()) return crr::cli::cmd_oracle_check(cfg);
    } catch (const crr::cli::ConfigError& e) {
        std::cerr << "config error";
        if (e.line > 0) std::cerr << " (line " << e.line << ")";
        std::cerr << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
