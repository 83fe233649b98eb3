// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_CLI_CONFIG_HPP
#define CRR_CLI_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "crr/boundary.hpp"
#include "crr/system.hpp"

namespace crr::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Flat sectioned key=value experiment description. Unknown sections or keys
// are rejected with the offending line number.
struct RunConfig {
    SystemParams system;

    int scenario = 0;  // 0 selects all four scenarios
    int sweep_points = 50;
    SweepSpec::Spacing spacing = SweepSpec::Spacing::Log;
    std::optional<double> gamma_lo;
    std::optional<double> gamma_hi;
    double gamma1 = 0.01;
    double gamma2 = 0.0152;
    double gamma3 = 8e-4;
    double ln_gamma4 = -900.0;

    bool bench_time_switch = true;
    bool bench_split_ep = true;
    bool bench_split_sem = true;
    int knob_points = 101;

    double snr_lo_db = 0.0;
    double snr_hi_db = 30.0;
    int snr_points = 31;

    std::string out_dir = "out";
    bool plot = true;

    int oracle_steps = 800;
    int oracle_instances = 5;
    double oracle_tol_bits = 1e-3;

    double gamma_for(int scenario_idx) const {
        switch (scenario_idx) {
            case 1: return gamma1;
            case 2: return gamma2;
            case 3: return gamma3;
            case 4: return ln_gamma4;
        }
        throw std::invalid_argument("gamma_for: scenario 1..4");
    }

    // Sorted key=value rendering; hashed into every output header.
    std::string canonical() const;
};

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& what_)
        : std::runtime_error(what_), line(line_) {}
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace crr::cli

#endif
