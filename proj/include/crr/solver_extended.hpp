// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_SOLVER_EXTENDED_HPP
#define CRR_SOLVER_EXTENDED_HPP

#include <Eigen/Dense>
#include <optional>

#include "crr/channel.hpp"
#include "crr/outcome.hpp"
#include "crr/system.hpp"

namespace crr {

// Unique positive stationary point of
//   log2(1 + p/(noise_over_gain + p))-type rate term with barrier weights:
//   (1/ln2)/(s + p) + mu/p^2 - v = 0,   s = noise/gain^2, mu > 0, v > 0.
// Solved by Cardano's formula (trigonometric branch when the discriminant is
// negative) and polished by safeguarded Newton.
double cubic_positive_root(double v, double mu, double s);

struct ExtendedSolveOptions {
    double gap_tol = 1e-6;
    long max_iters = 10000;
    double init_radius = 1e3;
    double vol_tol = 1e-10;
    std::optional<Eigen::Vector2d> warm_duals;
};

// Rate maximization under a trace bound on the inverse covariance. Dual
// search over (mu, v) by the ellipsoid method; per-subchannel powers from the
// stationarity cubic; Q diagonal in the right-singular basis of the channel.
SolveOutcome solve_trace(const ChannelSet& ch, const SystemParams& params, double gamma2,
                         const ExtendedSolveOptions& opts = {});

// Rate maximization under a floor on the minimum covariance eigenvalue.
// Single bisection on the power multiplier.
SolveOutcome solve_maxeig(const ChannelSet& ch, const SystemParams& params, double gamma3);

// Rate maximization under a log-determinant floor. gamma4 is accepted in
// natural-log domain only.
SolveOutcome solve_logdet(const ChannelSet& ch, const SystemParams& params, double ln_gamma4,
                          const ExtendedSolveOptions& opts = {});

struct PowerAllocation {
    Eigen::VectorXd p;
    CrbMetric metric = CrbMetric::Trace;
    double mu = 0;
    double v = 0;
    int rank_r = 0;
};

// Large-power limit of the optimal allocation: equal power over the
// communication modes, constant constraint-determined power on the dedicated
// sensing modes.
PowerAllocation asymptotic_allocation(const ChannelSet& ch, const SystemParams& params,
                                      CrbMetric metric, double gamma);

// p_1 >= ... >= p_r >= p_{r+1} = ... = p_M > 0 within slack 1e-8 * budget.
bool check_ordering(const PowerAllocation& alloc, double budget);

}  // namespace crr

#endif
