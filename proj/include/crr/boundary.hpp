// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_BOUNDARY_HPP
#define CRR_BOUNDARY_HPP

#include <optional>
#include <vector>

#include "crr/benchmarks.hpp"
#include "crr/channel.hpp"
#include "crr/outcome.hpp"
#include "crr/solver_extended.hpp"
#include "crr/solver_point.hpp"
#include "crr/system.hpp"

namespace crr {

struct ParetoPoint {
    double gamma = 0;          // CRB bound (ln domain in scenario 4)
    double rate = 0;
    double crb_achieved = kInf;
    bool constraint_active = false;
    int scenario = 0;
    Scheme scheme = Scheme::Optimal;
};

struct SweepSpec {
    int scenario = 2;
    int n_points = 50;
    enum class Spacing { Log, Linear } spacing = Spacing::Log;
    std::optional<double> gamma_lo;  // default: crb_min * (1 + 1e-6)
    std::optional<double> gamma_hi;  // default: crb at rate max, capped at crb_min * 1e3
};

struct SweepResult {
    std::vector<ParetoPoint> points;
    std::vector<SolveOutcome> outcomes;
    // Bound values the solver rejected as infeasible (logged, not emitted).
    std::vector<double> dropped;
    bool capped_hi = false;  // gamma_hi hit the fallback cap
};

// One solve per grid value of the CRB bound; points come back sorted by
// gamma with non-decreasing rate and are clamped to the capacity once the
// constraint goes slack. Adjacent solves share warm-started duals.
SweepResult pareto_sweep(const SweepSpec& spec, const ChannelSet& ch,
                         const SystemParams& params);

// Both corner CRB values for a scenario; the rate-max corner value may be
// +inf (rank-deficient covariance or vanishing Fisher denominator).
std::pair<double, double> feasibility_range(int scenario, const ChannelSet& ch,
                                            const SystemParams& params);

enum class SnrScheme { Optimal, CrbMinDesign, RateMaxDesign, TimeSwitch, SplitEP, SplitSEM };

inline const char* snr_scheme_name(SnrScheme s) {
    switch (s) {
        case SnrScheme::Optimal:       return "optimal";
        case SnrScheme::CrbMinDesign:  return "crb_min";
        case SnrScheme::RateMaxDesign: return "rate_max";
        case SnrScheme::TimeSwitch:    return "time_switch";
        case SnrScheme::SplitEP:       return "split_ep";
        case SnrScheme::SplitSEM:      return "split_sem";
    }
    return "?";
}

struct SnrPoint {
    double snr_db = 0;
    SnrScheme scheme = SnrScheme::Optimal;
    double rate = 0;
    bool feasible = false;
};

struct SnrBenchmarkToggles {
    bool time_switch = true;
    bool split_ep = true;
    bool split_sem = true;
    int knob_points = 101;
};

// Fixed CRB bound, power swept as noise_comm * 10^(snr/10). The CRB-min and
// rate-max designs bracket every scheme from below and above.
std::vector<SnrPoint> rate_vs_snr(int scenario, const ChannelSet& ch,
                                  const SystemParams& params, double gamma_fixed,
                                  const std::vector<double>& snr_db_grid,
                                  const SnrBenchmarkToggles& toggles = {});

// Scenario-aware feasibility comparison: additive slack in the log domain of
// scenario 4, multiplicative otherwise.
bool crb_within_bound(int scenario, double crb, double gamma, double tol = 1e-6);

// Dispatch to the scenario solver.
SolveOutcome solve_scenario(int scenario, const ChannelSet& ch, const SystemParams& params,
                            double gamma,
                            const std::optional<Eigen::VectorXd>& warm_duals = std::nullopt);

}  // namespace crr

#endif
