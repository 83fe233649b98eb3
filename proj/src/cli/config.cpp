// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace crr::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError(line, "expected a number, got '" + v + "'");
    }
}

long parse_int(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError(line, "expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(line, "expected a boolean, got '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;

    using Setter = std::function<void(RunConfig&, const std::string&, int)>;
    const std::map<std::string, Setter> keys = {
        {"system.m_tx", [](RunConfig& c, const std::string& v, int l) { c.system.m_tx = (int)parse_int(v, l); }},
        {"system.n_rx_sense", [](RunConfig& c, const std::string& v, int l) { c.system.n_rx_sense = (int)parse_int(v, l); }},
        {"system.n_rx_comm", [](RunConfig& c, const std::string& v, int l) { c.system.n_rx_comm = (int)parse_int(v, l); }},
        {"system.cpi_len", [](RunConfig& c, const std::string& v, int l) { c.system.cpi_len = (int)parse_int(v, l); }},
        {"system.power", [](RunConfig& c, const std::string& v, int l) { c.system.power = parse_double(v, l); }},
        {"system.noise_comm", [](RunConfig& c, const std::string& v, int l) { c.system.noise_comm = parse_double(v, l); }},
        {"system.noise_sense", [](RunConfig& c, const std::string& v, int l) { c.system.noise_sense = parse_double(v, l); }},
        {"system.reflect_re", [](RunConfig& c, const std::string& v, int l) { c.system.reflect_coeff = cplx(parse_double(v, l), c.system.reflect_coeff.imag()); }},
        {"system.reflect_im", [](RunConfig& c, const std::string& v, int l) { c.system.reflect_coeff = cplx(c.system.reflect_coeff.real(), parse_double(v, l)); }},
        {"system.target_angle", [](RunConfig& c, const std::string& v, int l) { c.system.target_angle = parse_double(v, l); }},
        {"system.rician_k", [](RunConfig& c, const std::string& v, int l) { c.system.rician_k = parse_double(v, l); }},
        {"system.los_aod", [](RunConfig& c, const std::string& v, int l) { c.system.los_aod = parse_double(v, l); }},
        {"system.los_aoa", [](RunConfig& c, const std::string& v, int l) { c.system.los_aoa = parse_double(v, l); }},
        {"system.seed", [](RunConfig& c, const std::string& v, int l) { c.system.seed = (std::uint64_t)parse_int(v, l); }},
        {"system.eta_epsilon", [](RunConfig& c, const std::string& v, int l) { c.system.eta_epsilon = parse_double(v, l); }},
        {"sweep.scenario", [](RunConfig& c, const std::string& v, int l) {
             if (v == "all") { c.scenario = 0; return; }
             const long s = parse_int(v, l);
             if (s < 1 || s > 4) throw ConfigError(l, "scenario must be 1..4 or 'all'");
             c.scenario = (int)s;
         }},
        {"sweep.points", [](RunConfig& c, const std::string& v, int l) { c.sweep_points = (int)parse_int(v, l); }},
        {"sweep.spacing", [](RunConfig& c, const std::string& v, int l) {
             if (v == "log") c.spacing = SweepSpec::Spacing::Log;
             else if (v == "linear") c.spacing = SweepSpec::Spacing::Linear;
             else throw ConfigError(l, "spacing must be 'log' or 'linear'");
         }},
        {"sweep.gamma_lo", [](RunConfig& c, const std::string& v, int l) { c.gamma_lo = parse_double(v, l); }},
        {"sweep.gamma_hi", [](RunConfig& c, const std::string& v, int l) { c.gamma_hi = parse_double(v, l); }},
        {"sweep.gamma1", [](RunConfig& c, const std::string& v, int l) { c.gamma1 = parse_double(v, l); }},
        {"sweep.gamma2", [](RunConfig& c, const std::string& v, int l) { c.gamma2 = parse_double(v, l); }},
        {"sweep.gamma3", [](RunConfig& c, const std::string& v, int l) { c.gamma3 = parse_double(v, l); }},
        {"sweep.ln_gamma4", [](RunConfig& c, const std::string& v, int l) { c.ln_gamma4 = parse_double(v, l); }},
        {"benchmarks.time_switch", [](RunConfig& c, const std::string& v, int l) { c.bench_time_switch = parse_bool(v, l); }},
        {"benchmarks.split_ep", [](RunConfig& c, const std::string& v, int l) { c.bench_split_ep = parse_bool(v, l); }},
        {"benchmarks.split_sem", [](RunConfig& c, const std::string& v, int l) { c.bench_split_sem = parse_bool(v, l); }},
        {"benchmarks.knob_points", [](RunConfig& c, const std::string& v, int l) { c.knob_points = (int)parse_int(v, l); }},
        {"snr.lo_db", [](RunConfig& c, const std::string& v, int l) { c.snr_lo_db = parse_double(v, l); }},
        {"snr.hi_db", [](RunConfig& c, const std::string& v, int l) { c.snr_hi_db = parse_double(v, l); }},
        {"snr.points", [](RunConfig& c, const std::string& v, int l) { c.snr_points = (int)parse_int(v, l); }},
        {"output.dir", [](RunConfig& c, const std::string& v, int) { c.out_dir = v; }},
        {"output.plot", [](RunConfig& c, const std::string& v, int l) { c.plot = parse_bool(v, l); }},
        {"oracle.steps", [](RunConfig& c, const std::string& v, int l) { c.oracle_steps = (int)parse_int(v, l); }},
        {"oracle.instances", [](RunConfig& c, const std::string& v, int l) { c.oracle_instances = (int)parse_int(v, l); }},
        {"oracle.tol_bits", [](RunConfig& c, const std::string& v, int l) { c.oracle_tol_bits = parse_double(v, l); }},
    };

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "system" && section != "sweep" && section != "benchmarks" &&
                section != "snr" && section != "output" && section != "oracle")
                throw ConfigError(line, "unknown section '" + section + "'");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (section.empty()) throw ConfigError(line, "key outside any [section]");
        const auto it = keys.find(section + "." + key);
        if (it == keys.end())
            throw ConfigError(line, "unknown key '" + key + "' in [" + section + "]");
        it->second(cfg, val, line);
    }

    try {
        cfg.system.validate();
    } catch (const std::exception& e) {
        throw ConfigError(0, std::string("invalid system parameters: ") + e.what());
    }
    if (cfg.sweep_points < 1) throw ConfigError(0, "sweep.points must be >= 1");
    if (cfg.knob_points < 2) throw ConfigError(0, "benchmarks.knob_points must be >= 2");
    if (cfg.snr_points < 1) throw ConfigError(0, "snr.points must be >= 1");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string RunConfig::canonical() const {
    std::ostringstream o;
    o.precision(17);
    o << "benchmarks.knob_points=" << knob_points << '\n'
      << "benchmarks.split_ep=" << bench_split_ep << '\n'
      << "benchmarks.split_sem=" << bench_split_sem << '\n'
      << "benchmarks.time_switch=" << bench_time_switch << '\n'
      << "oracle.instances=" << oracle_instances << '\n'
      << "oracle.steps=" << oracle_steps << '\n'
      << "oracle.tol_bits=" << oracle_tol_bits << '\n'
      << "output.dir=" << out_dir << '\n'
      << "output.plot=" << plot << '\n'
      << "snr.hi_db=" << snr_hi_db << '\n'
      << "snr.lo_db=" << snr_lo_db << '\n'
      << "snr.points=" << snr_points << '\n'
      << "sweep.gamma1=" << gamma1 << '\n'
      << "sweep.gamma2=" << gamma2 << '\n'
      << "sweep.gamma3=" << gamma3 << '\n';
    if (gamma_hi) o << "sweep.gamma_hi=" << *gamma_hi << '\n';
    if (gamma_lo) o << "sweep.gamma_lo=" << *gamma_lo << '\n';
    o << "sweep.ln_gamma4=" << ln_gamma4 << '\n'
      << "sweep.points=" << sweep_points << '\n'
      << "sweep.scenario=" << scenario << '\n'
      << "sweep.spacing=" << (spacing == SweepSpec::Spacing::Log ? "log" : "linear") << '\n'
      << "system.cpi_len=" << system.cpi_len << '\n'
      << "system.eta_epsilon=" << system.eta_epsilon << '\n'
      << "system.los_aoa=" << system.los_aoa << '\n'
      << "system.los_aod=" << system.los_aod << '\n'
      << "system.m_tx=" << system.m_tx << '\n'
      << "system.n_rx_comm=" << system.n_rx_comm << '\n'
      << "system.n_rx_sense=" << system.n_rx_sense << '\n'
      << "system.noise_comm=" << system.noise_comm << '\n'
      << "system.noise_sense=" << system.noise_sense << '\n'
      << "system.power=" << system.power << '\n'
      << "system.reflect_im=" << system.reflect_coeff.imag() << '\n'
      << "system.reflect_re=" << system.reflect_coeff.real() << '\n'
      << "system.rician_k=" << system.rician_k << '\n'
      << "system.seed=" << system.seed << '\n'
      << "system.target_angle=" << system.target_angle << '\n';
    return o.str();
}

}  // namespace crr::cli
