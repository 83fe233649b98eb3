// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_CORNER_HPP
#define CRR_CORNER_HPP

#include <Eigen/Dense>

#include "crr/channel.hpp"
#include "crr/metrics.hpp"
#include "crr/system.hpp"

namespace crr {

enum class CornerKind { RateMax, CrbMin };

// One endpoint of a C-R region boundary: either the unconstrained capacity
// point or the minimum-CRB point.
struct CornerPoint {
    Eigen::MatrixXcd q;
    double rate = 0;
    double crb = kInf;
    CornerKind kind = CornerKind::RateMax;
    double eta = 0;  // sensing/comm mixing weight, point-target CrbMin only
};

// Water-filling over parallel subchannels: p_k = (level - noise/g_k)^+ with
// sum p_k = P exactly. gains2 must be sorted non-increasing and positive.
struct WaterfillResult {
    Eigen::VectorXd p;
    double water_level = 0;
    double rate = 0;
};

WaterfillResult waterfill(const Eigen::VectorXd& gains2, double noise, double budget);

CornerPoint rate_max_waterfill(const ChannelSet& ch, const SystemParams& params);

// Minimum angle-CRB covariance for the point target. Three regimes by antenna
// count: N_s > M is the unique rank-1 solution along a*; N_s = M mixes the
// a* and adot* modes with eta chosen to maximize rate; N_s < M approaches the
// adot* mode, reported at eta = 1 - eta_epsilon.
CornerPoint crb_min_point(const ChannelSet& ch, const SystemParams& params);

// Minimum extended-target CRB: equal power P/M * I for all three metrics.
CornerPoint crb_min_extended(const ChannelSet& ch, const SystemParams& params,
                             CrbMetric metric);

// Metric value at the water-filling covariance; +inf when that covariance is
// rank-deficient (extended target) or the point-target Fisher denominator
// vanishes.
double crb_at_rate_max(const ChannelSet& ch, const SystemParams& params, CrbMetric metric);

// Power threshold below which water-filling leaves some mode empty even with
// a full-rank channel. +inf when rank(H_c) < M.
double power_threshold_p0(const ChannelSet& ch, const SystemParams& params);

// Minimum achievable CRB for any metric (closed forms; point-target value is
// the infimum, asymptotic for N_s < M).
double crb_min_value(const ChannelSet& ch, const SystemParams& params, CrbMetric metric);

}  // namespace crr

#endif
