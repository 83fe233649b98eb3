// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "crr/boundary.hpp"
#include "crr/corner.hpp"
#include "crr/metrics.hpp"
#include "crr/oracle.hpp"
#include "csv.hpp"

namespace crr::cli {

namespace {

std::ofstream open_output(const RunConfig& cfg, const std::string& name,
                          const std::string& command) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + path.string());
    write_header_block(os, cfg, command);
    return os;
}

std::vector<int> selected_scenarios(const RunConfig& cfg) {
    if (cfg.scenario == 0) return {1, 2, 3, 4};
    return {cfg.scenario};
}

ChannelSet make_channel(const RunConfig& cfg) {
    return rician_channel(cfg.system, cfg.system.los_aoa, cfg.system.los_aod);
}

Eigen::VectorXd uniform_grid(int n) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = static_cast<double>(i) / (n - 1);
    return g;
}

void write_plot_script(const RunConfig& cfg, const std::vector<int>& scenarios) {
    const auto path = std::filesystem::path(cfg.out_dir) / "plot_boundary.gp";
    std::ofstream os(path, std::ios::binary);
    os << "# gnuplot script, run from this directory: gnuplot plot_boundary.gp\n"
          "set datafile separator ','\n"
          "set datafile commentschars '#'\n"
          "set terminal pngcairo size 900,680\n"
          "set key bottom right\n"
          "set ylabel 'rate (bits per channel use)'\n";
    for (const int s : scenarios) {
        os << "\nset output 'boundary_" << s << ".png'\n";
        if (s == 4) {
            os << "unset logscale x\nset xlabel 'ln det bound'\n";
        } else {
            os << "set logscale x\nset xlabel 'CRB bound'\n";
        }
        os << "plot \\\n";
        const char* schemes[] = {"optimal", "time_switch", "split_ep", "split_sem"};
        bool first = true;
        for (const char* sc : schemes) {
            if (!first) os << ", \\\n";
            first = false;
            os << "  'boundary_" << s << ".csv' using (strcol(5) eq '" << sc
               << "' ? $1 : 1/0):2 with linespoints title '" << sc << "'";
        }
        os << "\n";
    }
}

}  // namespace

int cmd_corner(const RunConfig& cfg) {
    const ChannelSet ch = make_channel(cfg);
    auto os = open_output(cfg, "corners.csv", "corner");
    os << "scenario,kind,gamma,rate,eta,trace_q\n";
    for (const int s : selected_scenarios(cfg)) {
        const CrbMetric metric = metric_from_scenario(s);
        const CornerPoint wf = rate_max_waterfill(ch, cfg.system);
        os << s << ",rate_max," << fmt_double(crb_at_rate_max(ch, cfg.system, metric))
           << ',' << fmt_double(wf.rate) << ",,"
           << fmt_double(wf.q.trace().real()) << '\n';
        const CornerPoint cm = s == 1 ? crb_min_point(ch, cfg.system)
                                      : crb_min_extended(ch, cfg.system, metric);
        os << s << ",crb_min," << fmt_double(cm.crb) << ',' << fmt_double(cm.rate) << ',';
        if (s == 1) os << fmt_double(cm.eta);
        os << ',' << fmt_double(cm.q.trace().real()) << '\n';
    }
    return 0;
}

int cmd_boundary(const RunConfig& cfg) {
    const ChannelSet ch = make_channel(cfg);
    const std::vector<int> scenarios = selected_scenarios(cfg);
    bool any_points = false;
    bool any_maxiter = false;

    for (const int s : scenarios) {
        SweepSpec spec;
        spec.scenario = s;
        spec.n_points = cfg.sweep_points;
        spec.spacing = cfg.spacing;
        spec.gamma_lo = cfg.gamma_lo;
        spec.gamma_hi = cfg.gamma_hi;
        const SweepResult sweep = pareto_sweep(spec, ch, cfg.system);
        for (const auto& out : sweep.outcomes) {
            if (out.status == SolveStatus::MaxIterations) any_maxiter = true;
        }
        for (const double g : sweep.dropped) {
            std::cerr << "boundary: scenario " << s << ": bound " << fmt_double(g)
                      << " infeasible, dropped\n";
        }

        auto os = open_output(cfg, "boundary_" + std::to_string(s) + ".csv", "boundary");
        if (sweep.capped_hi)
            os << "# note: slack-side corner CRB is unbounded; grid capped\n";
        os << "gamma,rate,crb_achieved,active,scheme\n";
        for (const auto& pt : sweep.points) {
            any_points = true;
            os << fmt_double(pt.gamma) << ',' << fmt_double(pt.rate) << ','
               << fmt_double(pt.crb_achieved) << ',' << (pt.constraint_active ? 1 : 0)
               << ",optimal\n";
        }

        const CrbMetric metric = metric_from_scenario(s);
        const Eigen::VectorXd knobs = uniform_grid(cfg.knob_points);
        auto emit_bench = [&](Scheme scheme, bool enabled) {
            if (!enabled) return;
            if (s == 1 && scheme != Scheme::TimeSwitch) return;  // point target
            const auto env = benchmark_boundary(scheme, ch, cfg.system, metric, knobs);
            if (!env) {
                std::cerr << "boundary: scenario " << s << ": " << scheme_name(scheme)
                          << " not applicable (rate-max covariance is rank-deficient)\n";
                return;
            }
            for (const auto& pt : *env) {
                os << fmt_double(pt.crb) << ',' << fmt_double(pt.rate) << ','
                   << fmt_double(pt.crb) << ",," << scheme_name(scheme) << '\n';
            }
        };
        emit_bench(Scheme::TimeSwitch, cfg.bench_time_switch);
        emit_bench(Scheme::SplitEP, cfg.bench_split_ep);
        emit_bench(Scheme::SplitSEM, cfg.bench_split_sem);
    }

    if (cfg.plot) write_plot_script(cfg, scenarios);
    if (!any_points) return 3;
    return any_maxiter ? 4 : 0;
}

int cmd_rate_vs_snr(const RunConfig& cfg) {
    const ChannelSet ch = make_channel(cfg);
    const std::vector<int> scenarios = selected_scenarios(cfg);

    std::vector<double> grid(cfg.snr_points);
    for (int i = 0; i < cfg.snr_points; ++i) {
        grid[i] = cfg.snr_points == 1
                      ? cfg.snr_lo_db
                      : cfg.snr_lo_db +
                            (cfg.snr_hi_db - cfg.snr_lo_db) * i / (cfg.snr_points - 1);
    }
    SnrBenchmarkToggles toggles;
    toggles.time_switch = cfg.bench_time_switch;
    toggles.split_ep = cfg.bench_split_ep;
    toggles.split_sem = cfg.bench_split_sem;
    toggles.knob_points = cfg.knob_points;

    bool any_feasible = false;
    for (const int s : scenarios) {
        const std::string name = scenarios.size() == 1
                                     ? "rate_vs_snr.csv"
                                     : "rate_vs_snr_" + std::to_string(s) + ".csv";
        auto os = open_output(cfg, name, "rate-vs-snr");
        os << "snr_db,scheme,rate,status\n";
        const auto pts = rate_vs_snr(s, ch, cfg.system, cfg.gamma_for(s), grid, toggles);
        for (const auto& pt : pts) {
            if (pt.feasible) any_feasible = true;
            os << fmt_double(pt.snr_db) << ',' << snr_scheme_name(pt.scheme) << ','
               << fmt_double(pt.rate) << ',' << (pt.feasible ? "ok" : "infeasible") << '\n';
        }
    }
    return any_feasible ? 0 : 3;
}

int cmd_power_alloc(const RunConfig& cfg) {
    const ChannelSet ch = make_channel(cfg);
    auto os = open_output(cfg, "power_alloc.csv", "power-alloc");
    os << "scenario,subchannel,gamma,p_opt,p_waterfill,p_equal\n";

    const WaterfillResult wf =
        waterfill(ch.gains2(), cfg.system.noise_comm, cfg.system.power);
    Eigen::VectorXd p_wf = Eigen::VectorXd::Zero(cfg.system.m_tx);
    p_wf.head(ch.rank_r) = wf.p;
    const double p_eq = cfg.system.power / cfg.system.m_tx;

    bool any_ok = false;
    bool any_maxiter = false;
    for (const int s : selected_scenarios(cfg)) {
        if (s == 1) continue;  // eigenmode allocations exist for the extended metrics
        const SolveOutcome out = solve_scenario(s, ch, cfg.system, cfg.gamma_for(s));
        if (out.status == SolveStatus::Infeasible) {
            std::cerr << "power-alloc: scenario " << s << " infeasible at gamma "
                      << fmt_double(cfg.gamma_for(s)) << '\n';
            continue;
        }
        if (out.status == SolveStatus::MaxIterations) any_maxiter = true;
        any_ok = true;
        for (int k = 0; k < out.allocation.size(); ++k) {
            os << s << ',' << (k + 1) << ',' << fmt_double(cfg.gamma_for(s)) << ','
               << fmt_double(out.allocation(k)) << ',' << fmt_double(p_wf(k)) << ','
               << fmt_double(p_eq) << '\n';
        }
    }
    if (!any_ok) return 3;
    return any_maxiter ? 4 : 0;
}

int cmd_oracle_check(const RunConfig& cfg) {
    if (cfg.system.m_tx > 3)
        throw ConfigError(0, "oracle-check requires system.m_tx <= 3");

    const auto cases = oracle_check_suite(cfg.system, cfg.oracle_instances,
                                          cfg.oracle_steps, cfg.oracle_tol_bits);
    auto os = open_output(cfg, "oracle_check.csv", "oracle-check");
    os << "scenario,seed,gamma,solver_rate,oracle_rate,deviation_bits,pass\n";
    bool all_pass = true;
    double worst = 0;
    for (const auto& c : cases) {
        os << c.scenario << ',' << c.seed << ',' << fmt_double(c.gamma) << ','
           << fmt_double(c.solver_rate) << ',' << fmt_double(c.oracle_rate) << ','
           << fmt_double(c.deviation_bits) << ',' << (c.pass ? 1 : 0) << '\n';
        std::cout << (c.pass ? "PASS" : "FAIL") << " scenario " << c.scenario << " seed "
                  << c.seed << " deviation " << fmt_double(c.deviation_bits) << " bits\n";
        all_pass = all_pass && c.pass;
        worst = std::max(worst, c.deviation_bits);
    }
    std::cout << (all_pass ? "PASS" : "FAIL") << " oracle check, worst deviation "
              << fmt_double(worst) << " bits over " << cases.size() << " cases\n";
    return all_pass ? 0 : 1;
}

}  // namespace crr::cli
