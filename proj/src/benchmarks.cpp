// SPDX-License-Identifier: Apache-2.0

#include "crr/benchmarks.hpp"

#include <algorithm>
#include <cmath>

#include "crr/metrics.hpp"

namespace crr {

std::optional<BenchmarkCurvePoint> time_switching(const CornerPoint& q_rate,
                                                  const CornerPoint& q_crb, double frac,
                                                  CrbMetric metric, const SystemParams& params,
                                                  const ChannelSet&) {
    if (frac < 0 || frac > 1) throw std::invalid_argument("time_switching: frac in [0,1]");
    if (metric != CrbMetric::PointAngle) {
        // Needs a full-rank rate-max covariance, otherwise the blended CRB
        // stays unbounded at every split.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q_rate.q, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <=
            1e-12 * std::max(es.eigenvalues().maxCoeff(), 0.0))
            return std::nullopt;
    }

    BenchmarkCurvePoint pt;
    pt.scheme = Scheme::TimeSwitch;
    pt.knob = frac;
    const Eigen::MatrixXcd q_ts = frac * q_rate.q + (1.0 - frac) * q_crb.q;
    pt.crb = metric == CrbMetric::PointAngle ? crb_point_angle(q_ts, params)
                                             : crb_extended(q_ts, params, metric);
    pt.rate = frac * q_rate.rate + (1.0 - frac) * q_crb.rate;
    // Endpoints carry the corner covariances exactly; report the corner CRB
    // there so the knob endpoints reproduce the corner points bit for bit.
    if (frac == 0.0) pt.crb = q_crb.crb;
    return pt;
}

namespace {

BenchmarkCurvePoint split_point(const ChannelSet& ch, const SystemParams& params,
                                const Eigen::VectorXd& p, Scheme scheme, double beta,
                                CrbMetric metric) {
    BenchmarkCurvePoint pt;
    pt.scheme = scheme;
    pt.knob = beta;
    pt.rate = rate_alloc(p, ch.gains2(), params.noise_comm);
    if (metric == CrbMetric::PointAngle) {
        const Eigen::MatrixXcd q = ch.svd_v * p.asDiagonal() * ch.svd_v.adjoint();
        pt.crb = crb_point_angle(hermitianize(q), params);
    } else {
        pt.crb = crb_extended_alloc(p, params, metric);
    }
    return pt;
}

}  // namespace

BenchmarkCurvePoint power_split_ep(const ChannelSet& ch, const SystemParams& params,
                                   double beta, CrbMetric metric) {
    if (beta < 0 || beta > 1) throw std::invalid_argument("power_split_ep: beta in [0,1]");
    const int m = params.m_tx;
    const int r = ch.rank_r;
    if (r == m) beta = 1.0;
    Eigen::VectorXd p(m);
    for (int k = 0; k < m; ++k) {
        p(k) = k < r ? beta * params.power / r
                     : (1.0 - beta) * params.power / (m - r);
    }
    return split_point(ch, params, p, Scheme::SplitEP, beta, metric);
}

BenchmarkCurvePoint power_split_sem(const ChannelSet& ch, const SystemParams& params,
                                    double beta, CrbMetric metric) {
    if (beta < 0 || beta > 1) throw std::invalid_argument("power_split_sem: beta in [0,1]");
    const int m = params.m_tx;
    Eigen::VectorXd p(m);
    p(0) = beta * params.power;
    for (int k = 1; k < m; ++k) p(k) = (1.0 - beta) * params.power / (m - 1);
    return split_point(ch, params, p, Scheme::SplitSEM, beta, metric);
}

std::optional<std::vector<BenchmarkCurvePoint>> benchmark_boundary(
    Scheme scheme, const ChannelSet& ch, const SystemParams& params, CrbMetric metric,
    const Eigen::VectorXd& knob_grid) {
    if (knob_grid.size() == 0)
        throw std::invalid_argument("benchmark_boundary: empty knob grid");

    std::optional<CornerPoint> rate_corner;
    std::optional<CornerPoint> crb_corner;
    if (scheme == Scheme::TimeSwitch) {
        rate_corner = rate_max_waterfill(ch, params);
        rate_corner->crb = crb_at_rate_max(ch, params, metric);
        crb_corner = metric == CrbMetric::PointAngle
                         ? crb_min_point(ch, params)
                         : crb_min_extended(ch, params, metric);
    }

    std::vector<BenchmarkCurvePoint> pts;
    for (Eigen::Index i = 0; i < knob_grid.size(); ++i) {
        const double knob = knob_grid(i);
        std::optional<BenchmarkCurvePoint> pt;
        switch (scheme) {
            case Scheme::TimeSwitch:
                pt = time_switching(*rate_corner, *crb_corner, knob, metric, params, ch);
                if (!pt) return std::nullopt;
                break;
            case Scheme::SplitEP:
                pt = power_split_ep(ch, params, knob, metric);
                break;
            case Scheme::SplitSEM:
                pt = power_split_sem(ch, params, knob, metric);
                break;
            case Scheme::Optimal:
                throw std::invalid_argument("benchmark_boundary: use pareto_sweep for Optimal");
        }
        if (pt && std::isfinite(pt->crb)) pts.push_back(*pt);
    }

    // Upper envelope: sort by CRB, drop dominated points.
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.crb < b.crb || (a.crb == b.crb && a.rate > b.rate);
    });
    std::vector<BenchmarkCurvePoint> envelope;
    double best_rate = -kInf;
    for (const auto& pt : pts) {
        if (pt.rate > best_rate) {
            best_rate = pt.rate;
            envelope.push_back(pt);
        }
    }
    return envelope;
}

}  // namespace crr
