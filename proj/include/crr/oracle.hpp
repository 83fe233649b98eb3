// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_ORACLE_HPP
#define CRR_ORACLE_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "crr/channel.hpp"
#include "crr/system.hpp"

namespace crr {

// Result of a brute-force search. best_point is the raw search coordinates:
// eigenmode powers for the diagonal oracle, (q11, q22, Re q12, Im q12) for
// the Hermitian one.
struct OracleReport {
    double best_rate = -kInf;
    Eigen::VectorXd best_point;
    double grid_resolution = 0;
    long feasible_count = 0;
    double max_kkt_violation = 0;  // constraint violation of the reported point
};

// Exhaustive search over diagonal allocations in the channel eigenbasis,
// zoomed around the incumbent for resolution. Feasibility is decided by
// direct constraint evaluation only. M <= 3.
OracleReport grid_oracle_diagonal(const ChannelSet& ch, const SystemParams& params,
                                  CrbMetric metric, double gamma, int steps);

// Exhaustive search over 2x2 Hermitian covariances (four real parameters)
// with a coordinate-descent refinement pass. M = 2 only. Extended metrics
// search in the channel eigenbasis, the point metric in the antenna basis.
OracleReport grid_oracle_hermitian(const ChannelSet& ch, const SystemParams& params,
                                   CrbMetric metric, double gamma, int steps);

struct MleCheckResult {
    double empirical_var = 0;
    double crb = 0;
};

// Monte-Carlo maximum-likelihood angle estimation against the analytic bound.
// Valid in the near-efficient high-SNR regime; the contract is the loose
// sandwich empirical/crb in [1 - 3/sqrt(trials), 3].
MleCheckResult mle_variance_check(const SystemParams& params, const Eigen::MatrixXcd& q,
                                  int trials, std::uint64_t seed);

struct OracleCheckCase {
    int scenario = 0;
    std::uint64_t seed = 0;
    double gamma = 0;
    double solver_rate = 0;
    double oracle_rate = 0;
    double deviation_bits = 0;
    bool pass = false;
};

// Seeded random small instances per scenario, solver against oracle. The
// perturb hook lets a test corrupt the solver answer to prove the checker
// can fail.
std::vector<OracleCheckCase> oracle_check_suite(
    const SystemParams& base, int instances_per_scenario, int steps, double tol_bits,
    const std::function<double(int scenario, double rate)>& perturb = {});

}  // namespace crr

#endif
