// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_BENCHMARKS_HPP
#define CRR_BENCHMARKS_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "crr/channel.hpp"
#include "crr/corner.hpp"
#include "crr/system.hpp"

namespace crr {

enum class Scheme { Optimal, TimeSwitch, SplitEP, SplitSEM };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Optimal:    return "optimal";
        case Scheme::TimeSwitch: return "time_switch";
        case Scheme::SplitEP:    return "split_ep";
        case Scheme::SplitSEM:   return "split_sem";
    }
    return "?";
}

struct BenchmarkCurvePoint {
    Scheme scheme = Scheme::TimeSwitch;
    double knob = 0;  // time fraction or power-splitting factor, in [0,1]
    double crb = kInf;
    double rate = 0;
};

// CPI split between the rate-max and CRB-min covariances: the CRB is
// evaluated at the time-averaged covariance, the rate is the time-average of
// the corner rates. For extended metrics the rate-max covariance must be full
// rank; nullopt means the scheme is not applicable.
std::optional<BenchmarkCurvePoint> time_switching(const CornerPoint& q_rate,
                                                  const CornerPoint& q_crb, double frac,
                                                  CrbMetric metric, const SystemParams& params,
                                                  const ChannelSet& ch);

// beta P spread equally over the r communication eigenmodes, the rest spread
// over the dedicated sensing modes. beta is forced to 1 when r = M.
BenchmarkCurvePoint power_split_ep(const ChannelSet& ch, const SystemParams& params,
                                   double beta, CrbMetric metric);

// beta P on the strongest eigenmode, the rest spread over the other M-1.
BenchmarkCurvePoint power_split_sem(const ChannelSet& ch, const SystemParams& params,
                                    double beta, CrbMetric metric);

// Sweep the scheme knob over a grid and keep the Pareto-optimal upper
// envelope (non-decreasing rate along increasing CRB). nullopt propagates the
// time-switching applicability failure.
std::optional<std::vector<BenchmarkCurvePoint>> benchmark_boundary(
    Scheme scheme, const ChannelSet& ch, const SystemParams& params, CrbMetric metric,
    const Eigen::VectorXd& knob_grid);

}  // namespace crr

#endif
