// SPDX-License-Identifier: Apache-2.0

#include "crr/solver_point.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "crr/corner.hpp"
#include "crr/ellipsoid.hpp"
#include "crr/metrics.hpp"

namespace crr {

namespace {
constexpr double kLn2 = 0.6931471805599453;

Eigen::MatrixXcd outer(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
    return x.conjugate() * y.transpose();  // x* y^T
}
}  // namespace

Eigen::MatrixXcd build_c_matrix(const DualPoint& dual, const SteeringSet& s) {
    const int m = static_cast<int>(s.a.size());
    const double nb2 = s.b_norm2();
    const double ndb2 = s.b_dot_norm2();
    const cplx cross(dual.beta_d, dual.gamma_d);

    Eigen::MatrixXcd c = dual.lambda * Eigen::MatrixXcd::Identity(m, m);
    c -= dual.alpha_d * (nb2 * outer(s.a_dot, s.a_dot) + ndb2 * outer(s.a, s.a));
    c -= cross * nb2 * outer(s.a_dot, s.a);
    c -= std::conj(cross) * nb2 * outer(s.a, s.a_dot);
    c -= dual.nu_d * nb2 * outer(s.a, s.a);
    return hermitianize(c);
}

DualEvalResult dual_eval(const DualPoint& dual, const ChannelSet& ch,
                         const SystemParams& params, const SteeringSet& s,
                         double gamma_tilde1) {
    DualEvalResult res;
    const int m = params.m_tx;
    const Eigen::MatrixXcd c = build_c_matrix(dual, s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
    const Eigen::VectorXd ev = es.eigenvalues();  // ascending
    const double lam_max = std::max(ev.maxCoeff(), 0.0);
    const double neg_tol = 1e-9 * std::max(lam_max, 1.0);

    if (ev.minCoeff() < -neg_tol) {
        res.bounded = false;
        res.cut_vector = es.eigenvectors().col(0);
        return res;
    }

    // Split the spectrum into the strictly positive part and the numerical
    // null space (dimension at most 2 away from full).
    const double pos_tol = std::max(lam_max * 1e-10, 1e-300);
    std::vector<int> pos_idx;
    for (int i = 0; i < m; ++i) {
        if (ev(i) > pos_tol) pos_idx.push_back(i);
    }
    const int rc = static_cast<int>(pos_idx.size());

    if (rc == 0) {
        res.bounded = false;
        res.cut_vector = ch.svd_v.col(0);
        return res;
    }

    Eigen::MatrixXcd u1(m, rc);
    Eigen::VectorXd delta(rc);
    for (int i = 0; i < rc; ++i) {
        u1.col(i) = es.eigenvectors().col(pos_idx[i]);
        delta(i) = ev(pos_idx[i]);
    }

    if (rc < m) {
        // The dual stays bounded only if the channel's row space lies inside
        // the positive eigenspace.
        double worst = 0;
        Eigen::VectorXcd worst_dir;
        for (int j = 0; j < ch.rank_r; ++j) {
            const Eigen::VectorXcd vj = ch.svd_v.col(j);
            const Eigen::VectorXcd resid = vj - u1 * (u1.adjoint() * vj);
            const double n = resid.norm();
            if (n > worst) {
                worst = n;
                worst_dir = resid / n;
            }
        }
        if (worst > 1e-8) {
            res.bounded = false;
            res.cut_vector = worst_dir;
            return res;
        }
    }

    const Eigen::VectorXd dinv_sqrt = delta.array().rsqrt().matrix();
    const Eigen::MatrixXcd w = ch.h_comm * u1 * dinv_sqrt.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> wsvd(w, Eigen::ComputeThinV);
    const Eigen::VectorXd zeta = wsvd.singularValues();

    const double noise = params.noise_comm;
    double g = dual.lambda * params.power - dual.alpha_d / gamma_tilde1;
    Eigen::MatrixXcd q_bar = Eigen::MatrixXcd::Zero(rc, rc);
    for (int k = 0; k < zeta.size(); ++k) {
        const double z2 = zeta(k) * zeta(k);
        if (z2 <= 0) continue;
        const double p = 1.0 / kLn2 - noise / z2;
        if (p <= 0) continue;
        g += std::log2(1.0 + z2 * p / noise) - p;
        q_bar += p * (wsvd.matrixV().col(k) * wsvd.matrixV().col(k).adjoint());
    }

    const Eigen::MatrixXcd q11 =
        dinv_sqrt.asDiagonal() * q_bar * dinv_sqrt.asDiagonal();
    res.q_star = hermitianize(u1 * q11 * u1.adjoint());
    res.bounded = true;
    res.g = g;

    const FisherTerms t = point_fisher_terms(res.q_star, s);
    res.subgrad.resize(5);
    res.subgrad << params.power - res.q_star.trace().real(),
        t.t_dd - 1.0 / gamma_tilde1, 2.0 * t.t_da.real(), -2.0 * t.t_da.imag(), t.t_aa;
    return res;
}

namespace {

// Gradient of q^H C(duals) q for a unit vector q; used for the
// positive-semidefiniteness cut on C.
Eigen::VectorXd c_psd_cut(const Eigen::VectorXcd& q, const SteeringSet& s) {
    const double nb2 = s.b_norm2();
    const double ndb2 = s.b_dot_norm2();
    const cplx u = (s.a.transpose() * q)(0, 0);
    const cplx w = (s.a_dot.transpose() * q)(0, 0);
    const cplx sq = nb2 * std::conj(w) * u;  // q^H Adot^H A q
    Eigen::VectorXd grad(5);
    grad << 1.0, -(nb2 * std::norm(w) + ndb2 * std::norm(u)), -2.0 * sq.real(),
        2.0 * sq.imag(), -nb2 * std::norm(u);
    return grad;  // cut direction is -grad (constraint is -q^H C q <= 0)
}

Eigen::VectorXd z_psd_cut(const Eigen::Matrix2cd& z) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(z);
    const Eigen::Vector2cd v = es.eigenvectors().col(0);
    const cplx x = std::conj(v(0)) * v(1);
    Eigen::VectorXd grad(5);
    grad << 0.0, std::norm(v(0)), 2.0 * x.real(), -2.0 * x.imag(), std::norm(v(1));
    return grad;
}

// Shift a near-feasible covariance onto the feasible set: clip to the PSD
// cone, rescale to the power budget, then blend toward a strictly feasible
// sensing covariance until the CRB block clears.
Eigen::MatrixXcd repair_point_primal(const Eigen::MatrixXcd& q_in, const ChannelSet& ch,
                                     const SystemParams& params, const SteeringSet& s,
                                     double gamma_tilde1) {
    Eigen::MatrixXcd q = project_psd(q_in);
    const double tr = q.trace().real();
    if (tr > params.power) q *= params.power / tr;

    auto feasible = [&](const Eigen::MatrixXcd& qq) {
        const Eigen::Matrix2cd m2 = point_crb_constraint_matrix(qq, s, gamma_tilde1);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es2(m2, Eigen::EigenvaluesOnly);
        return es2.eigenvalues().minCoeff() >= 0;
    };
    if (feasible(q)) return q;

    const Eigen::MatrixXcd q_s = crb_min_point(ch, params).q;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(((1.0 - mid) * q + mid * q_s).eval()))
            hi = mid;
        else
            lo = mid;
    }
    return (1.0 - hi) * q + hi * q_s;
}

SolveOutcome pack_point(const Eigen::MatrixXcd& q, const ChannelSet& ch,
                        const SystemParams& params, const SteeringSet& s,
                        const DualPoint& dual, double gamma_tilde1, double gap,
                        SolveStatus status, long iters) {
    SolveOutcome out;
    out.scenario = 1;
    out.q = q;
    out.rate = rate(q, ch, params);
    out.crb = crb_point_angle(q, s, params);
    out.duals = {dual.lambda, dual.alpha_d, dual.beta_d, dual.gamma_d, dual.nu_d};
    out.constraint_active = dual.alpha_d + dual.nu_d > 1e-8;
    out.status = status;
    out.iterations = iters;

    const double rscale = std::max(1.0, std::abs(out.rate));
    const Eigen::Matrix2cd m2 = point_crb_constraint_matrix(q, s, gamma_tilde1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es2(m2, Eigen::EigenvaluesOnly);
    const double m2_scale = std::max(m2.norm(), 1e-300);
    const double tr = q.trace().real();

    out.kkt.stationarity = std::max(gap, 0.0) / rscale;
    out.kkt.feasibility_power = std::max(0.0, tr - params.power) / params.power;
    out.kkt.feasibility_crb = std::max(0.0, -es2.eigenvalues().minCoeff()) / m2_scale;

    const Eigen::Matrix2cd z = dual.z_matrix();
    // Pairing of the dual block with the constraint block, zero at optimum.
    const double bracket = (z(0, 0) * m2(0, 0) + z(0, 1) * m2(0, 1) +
                            z(1, 0) * m2(1, 0) + z(1, 1) * m2(1, 1))
                               .real();
    const double zscale = std::max(1.0, z.norm() * m2.norm());
    out.kkt.comp_slack =
        std::max(dual.lambda * std::abs(params.power - tr) / params.power,
                 std::abs(bracket) / zscale) /
        rscale;
    return out;
}

}  // namespace

SolveOutcome solve_p1(const ChannelSet& ch, const SystemParams& params, double gamma1,
                      const PointSolveOptions& opts) {
    const SteeringSet s = build_steering(params);
    const double gt1 = gamma_tilde_point(gamma1, params);

    const double crb_min = crb_min_value(ch, params, CrbMetric::PointAngle);
    if (gamma1 < crb_min * (1.0 - 1e-9)) {
        SolveOutcome out;
        out.scenario = 1;
        out.status = SolveStatus::Infeasible;
        return out;
    }

    // Constraint slack at the capacity point: water-filling is optimal.
    const CornerPoint wf = rate_max_waterfill(ch, params);
    if (crb_point_angle(wf.q, s, params) <= gamma1) {
        DualPoint dual;
        dual.lambda = 1.0 / (kLn2 * waterfill(ch.gains2(), params.noise_comm,
                                              params.power).water_level);
        return pack_point(wf.q, ch, params, s, dual, gt1, 0.0, SolveStatus::Optimal, 0);
    }

    // Dual descent by the ellipsoid method over (lambda, alpha, beta, gamma, nu).
    const double scale = std::max(1.0, 1.0 / params.power);
    Eigen::VectorXd center(5);
    center << scale, 0, 0, 0, 0;
    if (opts.warm_duals) center = *opts.warm_duals;

    const CornerPoint sensing_corner = crb_min_point(ch, params);
    double g_best = kInf;
    DualPoint x_best;
    Eigen::MatrixXcd q_best = sensing_corner.q;
    double rate_best = sensing_corner.rate;
    bool have_dual = false;
    bool converged = false;
    long iters = 0;

    // The dual optimum typically sits on the Z_P PSD boundary, so ellipsoid
    // centers keep landing a hair outside the cone. Constraint cuts drive the
    // geometry; dual values and primal candidates are tracked at the
    // PSD-projected center, which is always dual-feasible.
    const auto project_dual = [](const DualPoint& d) {
        DualPoint dp = d;
        dp.lambda = std::max(d.lambda, 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(d.z_matrix());
        if (es.eigenvalues().minCoeff() < 0) {
            const Eigen::Matrix2cd zp = es.eigenvectors() *
                                        es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                                        es.eigenvectors().adjoint();
            dp.alpha_d = zp(0, 0).real();
            dp.beta_d = zp(0, 1).real();
            dp.gamma_d = zp(0, 1).imag();
            dp.nu_d = zp(1, 1).real();
        }
        return dp;
    };

    const auto track = [&](const DualPoint& d, const DualEvalResult& ev) {
        if (!ev.bounded) return;
        if (ev.g < g_best) {
            g_best = ev.g;
            x_best = d;
            have_dual = true;
        }
        const Eigen::MatrixXcd cand = repair_point_primal(ev.q_star, ch, params, s, gt1);
        const double rc = rate(cand, ch, params);
        if (rc > rate_best) {
            rate_best = rc;
            q_best = cand;
        }
        if (g_best - rate_best <= opts.gap_tol) converged = true;
    };

    // Each restart recenters on the incumbent duals: zoom in when the pass
    // cut the gap meaningfully (polish), widen when it was a dud (the optimum
    // was outside the ball). A warm start that led nowhere falls back to the
    // default center once.
    double radius = opts.init_radius * scale;
    bool cold_fallback_done = !opts.warm_duals.has_value();
    for (int attempt = 0; attempt < 8 && !converged && iters < opts.max_iters; ++attempt) {
        const double gap_mark = g_best - rate_best;
        Ellipsoid ell(center, radius);
        for (; iters < opts.max_iters && !converged;) {
            ++iters;
            const DualPoint d = DualPoint::from_vec(ell.center());
            const Eigen::Matrix2cd z = d.z_matrix();
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> zes(z, Eigen::EigenvaluesOnly);
            const bool z_ok =
                zes.eigenvalues().minCoeff() >= -1e-12 * std::max(1.0, z.norm());
            const bool lambda_ok = d.lambda >= 0;

            if (lambda_ok && z_ok) {
                const DualEvalResult ev = dual_eval(d, ch, params, s, gt1);
                if (ev.bounded) {
                    track(d, ev);
                    if (converged) break;
                    ell.cut(ev.subgrad);
                } else {
                    ell.cut((-c_psd_cut(ev.cut_vector, s)).eval());
                }
            } else {
                const DualPoint dp = project_dual(d);
                track(dp, dual_eval(dp, ch, params, s, gt1));
                if (converged) break;
                if (!lambda_ok) {
                    Eigen::VectorXd cut(5);
                    cut << -1, 0, 0, 0, 0;
                    ell.cut(cut);
                } else {
                    ell.cut((-z_psd_cut(z)).eval());
                }
            }
            if (ell.degenerate() || ell.volume_ratio() < 1e-40) break;
        }
        if (converged) break;
        const double gap_now = g_best - rate_best;
        const bool improved = gap_now < 0.5 * gap_mark;
        if (!improved && !cold_fallback_done) {
            cold_fallback_done = true;
            center.setZero();
            center(0) = scale;
            radius = opts.init_radius * scale;
            continue;
        }
        if (have_dual) center = x_best.to_vec();
        radius = improved ? std::max(radius * 1e-3, 1e-9 * scale) : radius * 30.0;
    }

    // Primal recovery at the best dual point. When C is singular there, the
    // null-space completion spreads the residual power over U0 to open the
    // CRB block before the final repair.
    if (have_dual) {
        const DualEvalResult ev = dual_eval(x_best, ch, params, s, gt1);
        if (ev.bounded) {
            Eigen::MatrixXcd q_rec = ev.q_star;
            const Eigen::MatrixXcd c = build_c_matrix(x_best, s);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ces(c);
            const double lam_max = std::max(ces.eigenvalues().maxCoeff(), 0.0);
            std::vector<int> null_idx;
            for (int i = 0; i < params.m_tx; ++i) {
                if (ces.eigenvalues()(i) <= 1e-9 * std::max(lam_max, 1.0))
                    null_idx.push_back(i);
            }
            const double w_total = params.power - q_rec.trace().real();
            if (!null_idx.empty() && w_total > 0) {
                auto margin = [&](const Eigen::MatrixXcd& qq) {
                    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> e2(
                        point_crb_constraint_matrix(qq, s, gt1), Eigen::EigenvaluesOnly);
                    return e2.eigenvalues().minCoeff();
                };
                if (null_idx.size() == 1) {
                    const Eigen::VectorXcd u0 = ces.eigenvectors().col(null_idx[0]);
                    const Eigen::MatrixXcd q_try =
                        q_rec + w_total * (u0 * u0.adjoint());
                    if (margin(q_try) > margin(q_rec)) q_rec = q_try;
                } else {
                    const Eigen::VectorXcd u0 = ces.eigenvectors().col(null_idx[0]);
                    const Eigen::VectorXcd u1v = ces.eigenvectors().col(null_idx[1]);
                    auto with_split = [&](double t) {
                        return (q_rec + t * (u0 * u0.adjoint()) +
                                (w_total - t) * (u1v * u1v.adjoint()))
                            .eval();
                    };
                    double best_t = 0, best_margin = margin(with_split(0));
                    const int grid = 64;
                    for (int i = 1; i <= grid; ++i) {
                        const double t = w_total * i / grid;
                        const double mg = margin(with_split(t));
                        if (mg > best_margin) {
                            best_margin = mg;
                            best_t = t;
                        }
                    }
                    if (best_margin > margin(q_rec)) q_rec = with_split(best_t);
                }
            }
            const Eigen::MatrixXcd cand = repair_point_primal(q_rec, ch, params, s, gt1);
            const double rc = rate(cand, ch, params);
            if (rc > rate_best) {
                rate_best = rc;
                q_best = cand;
            }
        }
    }

    const double gap = g_best - rate_best;
    const SolveStatus status =
        (converged || gap <= opts.gap_tol) ? SolveStatus::Optimal : SolveStatus::MaxIterations;
    return pack_point(q_best, ch, params, s, x_best, gt1, gap, status, iters);
}

}  // namespace crr
