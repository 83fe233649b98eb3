// SPDX-License-Identifier: Apache-2.0

#include "crr/corner.hpp"

#include <cmath>

namespace crr {

WaterfillResult waterfill(const Eigen::VectorXd& gains2, double noise, double budget) {
    const int r = static_cast<int>(gains2.size());
    if (r < 1) throw std::invalid_argument("waterfill: empty gain vector");
    Eigen::VectorXd floors(r);  // noise/g_k, non-decreasing
    for (int k = 0; k < r; ++k) floors(k) = noise / gains2(k);

    // Active set is a prefix; scan for the one whose level clears its own
    // floor but not the next.
    WaterfillResult out;
    out.p = Eigen::VectorXd::Zero(r);
    double prefix = 0;
    for (int m = 1; m <= r; ++m) {
        prefix += floors(m - 1);
        const double level = (budget + prefix) / m;
        const bool above_own = level > floors(m - 1);
        const bool below_next = (m == r) || (level <= floors(m));
        if (above_own && below_next) {
            out.water_level = level;
            for (int k = 0; k < m; ++k) out.p(k) = level - floors(k);
            // Pin the sum to the budget exactly.
            const double drift = budget - out.p.head(m).sum();
            out.p(0) += drift;
            break;
        }
    }
    out.rate = rate_alloc(out.p, gains2, noise);
    return out;
}

CornerPoint rate_max_waterfill(const ChannelSet& ch, const SystemParams& params) {
    if (ch.rank_r < 1) throw std::invalid_argument("rate_max_waterfill: zero channel");
    const WaterfillResult wf = waterfill(ch.gains2(), params.noise_comm, params.power);

    Eigen::VectorXd p_full = Eigen::VectorXd::Zero(params.m_tx);
    p_full.head(ch.rank_r) = wf.p;

    CornerPoint c;
    c.kind = CornerKind::RateMax;
    c.q = ch.svd_v * p_full.asDiagonal() * ch.svd_v.adjoint();
    c.rate = wf.rate;
    c.crb = kInf;  // metric-dependent; see crb_at_rate_max
    return c;
}

namespace {

Eigen::MatrixXcd point_corner_q(const SteeringSet& s, double power, double eta) {
    const Eigen::MatrixXcd qa =
        (s.a.conjugate() * s.a.transpose()) / s.a_norm2();
    if (eta == 0.0) return power * qa;
    const Eigen::MatrixXcd qd =
        (s.a_dot.conjugate() * s.a_dot.transpose()) / s.a_dot_norm2();
    return power * (eta * qd + (1.0 - eta) * qa);
}

// Golden-section maximization of a unimodal scalar function on [lo, hi].
template <typename F>
double golden_max(F f, double lo, double hi, double tol) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

CornerPoint crb_min_point(const ChannelSet& ch, const SystemParams& params) {
    const SteeringSet s = build_steering(params);
    CornerPoint c;
    c.kind = CornerKind::CrbMin;

    const int m = params.m_tx;
    const int ns = params.n_rx_sense;
    if (ns > m) {
        c.eta = 0.0;
    } else if (ns == m) {
        auto rate_of = [&](double eta) {
            return rate(point_corner_q(s, params.power, eta), ch, params);
        };
        c.eta = golden_max(rate_of, 0.0, 1.0 - 1e-9, 1e-10);
        // Endpoints can beat an interior golden-section iterate when the
        // profile is monotone.
        const double best = rate_of(c.eta);
        if (rate_of(0.0) >= best) c.eta = 0.0;
        if (rate_of(1.0 - 1e-9) > std::max(best, rate_of(c.eta))) c.eta = 1.0 - 1e-9;
    } else {
        c.eta = 1.0 - params.eta_epsilon;
    }

    c.q = point_corner_q(s, params.power, c.eta);
    c.rate = rate(c.q, ch, params);
    c.crb = crb_point_angle(c.q, s, params);
    return c;
}

CornerPoint crb_min_extended(const ChannelSet& ch, const SystemParams& params,
                             CrbMetric metric) {
    CornerPoint c;
    c.kind = CornerKind::CrbMin;
    const int m = params.m_tx;
    c.q = (params.power / m) * Eigen::MatrixXcd::Identity(m, m);
    c.crb = crb_extended_alloc(Eigen::VectorXd::Constant(m, params.power / m), params, metric);
    c.rate = rate_alloc(Eigen::VectorXd::Constant(ch.rank_r, params.power / m),
                        ch.gains2(), params.noise_comm);
    return c;
}

double crb_at_rate_max(const ChannelSet& ch, const SystemParams& params, CrbMetric metric) {
    const CornerPoint wf = rate_max_waterfill(ch, params);
    if (metric == CrbMetric::PointAngle) {
        return crb_point_angle(wf.q, params);
    }
    return crb_extended(wf.q, params, metric);
}

double power_threshold_p0(const ChannelSet& ch, const SystemParams& params) {
    if (ch.rank_r < params.m_tx) return kInf;
    const Eigen::VectorXd g2 = ch.gains2();
    const double s2 = params.noise_comm;
    double p0 = 0;
    for (int i = 0; i < params.m_tx - 1; ++i) {
        p0 += s2 / g2(params.m_tx - 1) - s2 / g2(i);
    }
    return p0;
}

double crb_min_value(const ChannelSet& ch, const SystemParams& params, CrbMetric metric) {
    if (metric == CrbMetric::PointAngle) {
        const SteeringSet s = build_steering(params);
        const double a2 = std::norm(params.reflect_coeff);
        if (a2 <= 0) return kInf;
        const double common = 2.0 * a2 * params.cpi_len * params.power;
        const int m = params.m_tx;
        const int ns = params.n_rx_sense;
        // Fisher at the best rank-1/mixed covariance; for N_s <= M the
        // adot-mode term dominates and the N_s < M value is the eta -> 1 limit.
        if (ns > m) {
            return params.noise_sense / (common * s.b_dot_norm2() * s.a_norm2());
        }
        return params.noise_sense / (common * s.b_norm2() * s.a_dot_norm2());
    }
    return crb_min_extended(ch, params, metric).crb;
}

}  // namespace crr
