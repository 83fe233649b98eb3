// SPDX-License-Identifier: Apache-2.0

#include "crr/solver_extended.hpp"

#include <cmath>
#include <functional>

#include "crr/corner.hpp"
#include "crr/ellipsoid.hpp"
#include "crr/metrics.hpp"

namespace crr {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kPi = 3.14159265358979323846;

double stationarity_trace(double p, double v, double mu, double s) {
    return (1.0 / kLn2) / (s + p) + mu / (p * p) - v;
}

// Cardano candidate for v p^3 + (v s - 1/ln2) p^2 - mu p - mu s = 0.
double cardano_candidate(double v, double mu, double s) {
    const double a = v;
    const double b = v * s - 1.0 / kLn2;
    const double c = -mu;
    const double d = -mu * s;
    const double t1 = b / (3.0 * a);
    const double t2 =
        (27.0 * a * a * d - 9.0 * a * b * c + 2.0 * b * b * b) / (54.0 * a * a * a);
    const double t3 = (3.0 * a * c - b * b) / (9.0 * a * a);
    const double disc = t2 * t2 + t3 * t3 * t3;
    if (disc >= 0) {
        const double sq = std::sqrt(disc);
        return -t1 + std::cbrt(-t2 + sq) + std::cbrt(-t2 - sq);
    }
    // Three real roots; the surd form leaves the reals. Exactly one root is
    // positive (the stationarity function is strictly decreasing on p > 0),
    // so pick it among the trigonometric triple.
    const double rr = std::sqrt(-t3);
    const double phi = std::acos(std::clamp(-t2 / (rr * rr * rr), -1.0, 1.0));
    double best = -1;
    for (int i = 0; i < 3; ++i) {
        const double root = 2.0 * rr * std::cos((phi - 2.0 * kPi * i) / 3.0) - t1;
        if (root > 0 && (best < 0 || std::abs(stationarity_trace(root, v, mu, s)) <
                                         std::abs(stationarity_trace(best, v, mu, s))))
            best = root;
    }
    return best;
}

}  // namespace

double cubic_positive_root(double v, double mu, double s) {
    if (!(v > 0)) throw std::invalid_argument("cubic_positive_root: v must be > 0");
    if (mu <= 0) return std::max(1.0 / (v * kLn2) - s, 0.0);

    double p = cardano_candidate(v, mu, s);

    // Safeguarded Newton on the (monotone) stationarity function; a bracket
    // always exists because psi(0+) = +inf and psi(inf) = -v.
    double hi = std::max({p > 0 ? p : 0.0, 1.0 / (v * kLn2), std::sqrt(mu / v)}) + s + 1.0;
    int guard = 0;
    while (stationarity_trace(hi, v, mu, s) > 0 && guard++ < 200) hi *= 2.0;
    double lo = hi;
    guard = 0;
    while (stationarity_trace(lo, v, mu, s) <= 0 && guard++ < 2000) lo *= 0.5;

    if (!(p > lo && p < hi) || !std::isfinite(p)) p = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double f = stationarity_trace(p, v, mu, s);
        if (f > 0) lo = p; else hi = p;
        const double df = -(1.0 / kLn2) / ((s + p) * (s + p)) - 2.0 * mu / (p * p * p);
        double step = p - f / df;
        if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
        if (std::abs(step - p) <= 1e-15 * p) { p = step; break; }
        p = step;
    }
    return p;
}

namespace {

struct ExtEval {
    double g = kInf;
    Eigen::VectorXd p;
    Eigen::Vector2d subgrad;
};

struct ExtProblem {
    // Dual function value, maximizing allocation, and subgradient at (mu, v).
    // Caller guarantees mu > 0 and v > 0.
    std::function<ExtEval(double mu, double v)> eval;
    // Constraint value c(p) and feasibility direction: trace wants
    // sum 1/p <= limit, logdet wants sum ln p >= limit.
    std::function<bool(const Eigen::VectorXd&)> feasible;
    // Residual pair [crb_residual, power_residual] for Newton polish, with
    // analytic Jacobian w.r.t. (mu, v).
    std::function<void(double mu, double v, Eigen::Vector2d& f, Eigen::Matrix2d& jac,
                       Eigen::VectorXd& p)> kkt_system;
};

Eigen::VectorXd blend_feasible(const Eigen::VectorXd& p_raw, const ExtProblem& prob,
                               double budget, int m) {
    Eigen::VectorXd p = p_raw.cwiseMax(0.0);
    const double total = p.sum();
    if (total > budget) p *= budget / total;
    if (prob.feasible(p)) return p;
    const Eigen::VectorXd eq = Eigen::VectorXd::Constant(m, budget / m);
    double lo = 0.0, hi = 1.0;  // eq is strictly feasible whenever the bound is slack
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (prob.feasible(((1.0 - mid) * p + mid * eq).eval()))
            hi = mid;
        else
            lo = mid;
    }
    return (1.0 - hi) * p + hi * eq;
}

struct DualSearchResult {
    bool converged = false;
    double g_best = kInf;
    Eigen::Vector2d x_best{1.0, 1.0};
    Eigen::VectorXd p_best;
    double rate_best = -kInf;
    long iters = 0;
};

DualSearchResult dual_search_2d(const ExtProblem& prob, const ExtendedSolveOptions& opts,
                                const Eigen::VectorXd& p_seed, double rate_seed,
                                const Eigen::VectorXd& gains2, double noise,
                                double budget, int m) {
    DualSearchResult res;
    res.p_best = p_seed;
    res.rate_best = rate_seed;

    Eigen::Vector2d center(1.0, 1.0);
    if (opts.warm_duals) center = *opts.warm_duals;
    center = center.cwiseMax(1e-12);

    double radius = opts.init_radius;
    for (int attempt = 0; attempt < 4 && !res.converged; ++attempt, radius *= 100.0) {
        Ellipsoid ell(center, radius);
        for (long it = 0; it < opts.max_iters; ++it) {
            ++res.iters;
            const double mu = ell.center()(0);
            const double v = ell.center()(1);
            if (mu <= 0) {
                ell.cut(Eigen::Vector2d(-1.0, 0.0));
            } else if (v <= 0) {
                ell.cut(Eigen::Vector2d(0.0, -1.0));
            } else {
                const ExtEval ev = prob.eval(mu, v);
                if (ev.g < res.g_best) {
                    res.g_best = ev.g;
                    res.x_best = Eigen::Vector2d(mu, v);
                }
                const Eigen::VectorXd cand = blend_feasible(ev.p, prob, budget, m);
                const double rc = rate_alloc(cand, gains2, noise);
                if (rc > res.rate_best) {
                    res.rate_best = rc;
                    res.p_best = cand;
                }
                if (res.g_best - res.rate_best <= opts.gap_tol) {
                    res.converged = true;
                    break;
                }
                ell.cut(ev.subgrad);
            }
            if (ell.degenerate() || ell.volume_ratio() < 1e-40) break;
        }
        if (!res.converged && std::isfinite(res.x_best(0))) center = res.x_best.cwiseMax(1e-12);
    }
    return res;
}

bool newton_polish(const ExtProblem& prob, Eigen::Vector2d& x, Eigen::VectorXd& p,
                   double scale_crb, double scale_power) {
    Eigen::Vector2d f;
    Eigen::Matrix2d jac;
    Eigen::VectorXd pw;
    double best_norm = kInf;
    Eigen::Vector2d best_x = x;
    for (int it = 0; it < 40; ++it) {
        if (!(x(0) > 0) || !(x(1) > 0)) break;
        prob.kkt_system(x(0), x(1), f, jac, pw);
        const double fn = std::hypot(f(0) / scale_crb, f(1) / scale_power);
        if (fn < best_norm) {
            best_norm = fn;
            best_x = x;
            p = pw;
        }
        if (fn < 1e-13) break;
        const double det = jac(0, 0) * jac(1, 1) - jac(0, 1) * jac(1, 0);
        if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
        Eigen::Vector2d step = jac.inverse() * f;
        double damp = 1.0;
        while (damp > 1e-6 && ((x - damp * step).array() <= 0).any()) damp *= 0.5;
        x -= damp * step;
    }
    x = best_x;
    return best_norm < 1e-10;
}

SolveOutcome pack_extended(const ChannelSet& ch, const SystemParams& params,
                           CrbMetric metric, const Eigen::VectorXd& p,
                           std::vector<double> duals, bool active, SolveStatus status,
                           long iters, double gap) {
    SolveOutcome out;
    out.scenario = scenario_index(metric);
    out.allocation = p;
    out.q = ch.svd_v * p.asDiagonal() * ch.svd_v.adjoint();
    out.q = hermitianize(out.q);
    out.rate = rate_alloc(p, ch.gains2(), params.noise_comm);
    out.crb = crb_extended_alloc(p, params, metric);
    out.duals = std::move(duals);
    out.constraint_active = active;
    out.status = status;
    out.iterations = iters;

    const double rscale = std::max(1.0, std::abs(out.rate));
    out.kkt.stationarity = std::max(gap, 0.0) / rscale;
    out.kkt.feasibility_power = std::max(0.0, p.sum() - params.power) / params.power;
    return out;
}

SolveOutcome infeasible_outcome(CrbMetric metric) {
    SolveOutcome out;
    out.scenario = scenario_index(metric);
    out.status = SolveStatus::Infeasible;
    out.rate = 0;
    out.crb = kInf;
    return out;
}

Eigen::VectorXd noise_floors(const ChannelSet& ch, double noise) {
    const Eigen::VectorXd g2 = ch.gains2();
    Eigen::VectorXd s(g2.size());
    for (int k = 0; k < g2.size(); ++k) s(k) = noise / g2(k);
    return s;
}

}  // namespace

SolveOutcome solve_trace(const ChannelSet& ch, const SystemParams& params, double gamma2,
                         const ExtendedSolveOptions& opts) {
    const int m = params.m_tx;
    const int r = ch.rank_r;
    const double pb = params.power;
    const double gt = gamma_tilde_trace(gamma2, params);
    const Eigen::VectorXd g2 = ch.gains2();
    const Eigen::VectorXd s = noise_floors(ch, params.noise_comm);

    const double min_trinv = static_cast<double>(m) * m / pb;
    if (gt < min_trinv * (1.0 - 1e-12)) return infeasible_outcome(CrbMetric::Trace);
    if (gt <= min_trinv * (1.0 + 1e-12)) {
        // Equal power is the only feasible point; multipliers are reported as
        // a least-squares fit of the per-mode stationarity conditions.
        const Eigen::VectorXd p = Eigen::VectorXd::Constant(m, pb / m);
        return pack_extended(ch, params, CrbMetric::Trace, p, {1.0, 1.0}, true,
                             SolveStatus::Optimal, 0, 0.0);
    }

    // Constraint inactive at water-filling: done.
    if (r == m) {
        const WaterfillResult wf = waterfill(g2, params.noise_comm, pb);
        if (wf.p.minCoeff() > 0) {
            double trinv = 0;
            for (int k = 0; k < m; ++k) trinv += 1.0 / wf.p(k);
            if (trinv <= gt) {
                const double v = 1.0 / (wf.water_level * kLn2);
                SolveOutcome out = pack_extended(ch, params, CrbMetric::Trace, wf.p,
                                                 {0.0, v}, false, SolveStatus::Optimal, 0, 0.0);
                out.kkt.feasibility_crb = 0;
                return out;
            }
        }
    }

    ExtProblem prob;
    prob.feasible = [&](const Eigen::VectorXd& p) {
        if (p.minCoeff() <= 0) return false;
        double trinv = 0;
        for (int k = 0; k < p.size(); ++k) trinv += 1.0 / p(k);
        return trinv <= gt && p.sum() <= pb * (1.0 + 1e-12);
    };
    auto alloc_at = [&](double mu, double v) {
        Eigen::VectorXd p(m);
        for (int k = 0; k < r; ++k) p(k) = cubic_positive_root(v, mu, s(k));
        const double ps = mu > 0 ? std::sqrt(mu / v) : 0.0;
        for (int k = r; k < m; ++k) p(k) = ps;
        return p;
    };
    prob.eval = [&](double mu, double v) {
        ExtEval ev;
        ev.p = alloc_at(mu, v);
        double g = mu * gt + v * pb;
        double trinv = 0, total = 0;
        for (int k = 0; k < m; ++k) {
            const double p = ev.p(k);
            if (k < r) g += std::log2(1.0 + g2(k) * p / params.noise_comm);
            if (p > 0) {
                g -= mu / p + v * p;
                trinv += 1.0 / p;
                total += p;
            } else if (mu > 0) {
                trinv = kInf;
            }
        }
        ev.g = g;
        ev.subgrad = Eigen::Vector2d(-(trinv - gt), -(total - pb));
        return ev;
    };
    prob.kkt_system = [&](double mu, double v, Eigen::Vector2d& f, Eigen::Matrix2d& jac,
                          Eigen::VectorXd& p) {
        p = alloc_at(mu, v);
        f.setZero();
        jac.setZero();
        for (int k = 0; k < m; ++k) {
            const double pk = p(k);
            double dp_dmu, dp_dv;
            if (k < r) {
                const double dpsi = -(1.0 / kLn2) / ((s(k) + pk) * (s(k) + pk)) -
                                    2.0 * mu / (pk * pk * pk);
                dp_dmu = -(1.0 / (pk * pk)) / dpsi;
                dp_dv = 1.0 / dpsi;
            } else {
                dp_dmu = 1.0 / (2.0 * std::sqrt(mu * v));
                dp_dv = -0.5 * std::sqrt(mu) / (v * std::sqrt(v));
            }
            f(0) += 1.0 / pk;
            f(1) += pk;
            jac(0, 0) += -dp_dmu / (pk * pk);
            jac(0, 1) += -dp_dv / (pk * pk);
            jac(1, 0) += dp_dmu;
            jac(1, 1) += dp_dv;
        }
        f(0) -= gt;
        f(1) -= pb;
    };

    const Eigen::VectorXd p_eq = Eigen::VectorXd::Constant(m, pb / m);
    const double rate_eq = rate_alloc(p_eq, g2, params.noise_comm);
    DualSearchResult res =
        dual_search_2d(prob, opts, p_eq, rate_eq, g2, params.noise_comm, pb, m);

    Eigen::Vector2d x = res.x_best;
    Eigen::VectorXd p = res.p_best;
    const bool polished = newton_polish(prob, x, p, gt, pb);
    if (polished) {
        p = blend_feasible(p, prob, pb, m);
        const double rp = rate_alloc(p, g2, params.noise_comm);
        if (rp >= res.rate_best) res.rate_best = rp; else p = res.p_best;
        res.g_best = std::min(res.g_best, prob.eval(x(0), x(1)).g);
    } else {
        p = res.p_best;
    }

    const double gap = res.g_best - res.rate_best;
    const SolveStatus status = (res.converged || polished || gap <= opts.gap_tol)
                                   ? SolveStatus::Optimal
                                   : SolveStatus::MaxIterations;
    SolveOutcome out = pack_extended(ch, params, CrbMetric::Trace, p,
                                     {x(0), x(1)}, x(0) > 1e-8, status, res.iters, gap);
    double trinv = 0;
    for (int k = 0; k < m; ++k) trinv += 1.0 / p(k);
    out.kkt.feasibility_crb = std::max(0.0, (trinv - gt) / gt);
    out.kkt.comp_slack = std::max(x(0) * std::abs(trinv - gt) / gt,
                                  x(1) * std::abs(p.sum() - pb) / pb) /
                         std::max(1.0, std::abs(out.rate));
    return out;
}

SolveOutcome solve_maxeig(const ChannelSet& ch, const SystemParams& params, double gamma3) {
    const int m = params.m_tx;
    const int r = ch.rank_r;
    const double pb = params.power;
    const double floor = gamma_tilde_maxeig(gamma3, params);
    const Eigen::VectorXd g2 = ch.gains2();
    const Eigen::VectorXd s = noise_floors(ch, params.noise_comm);

    if (m * floor > pb * (1.0 + 1e-12)) return infeasible_outcome(CrbMetric::MaxEig);

    auto alloc_at = [&](double v) {
        Eigen::VectorXd p = Eigen::VectorXd::Constant(m, floor);
        for (int k = 0; k < r; ++k) p(k) = std::max(1.0 / (v * kLn2) - s(k), floor);
        return p;
    };

    Eigen::VectorXd p;
    double v;
    long iters = 0;
    if (m * floor >= pb * (1.0 - 1e-12)) {
        p = Eigen::VectorXd::Constant(m, floor);
        v = 0;
        for (int k = 0; k < r; ++k) v = std::max(v, (1.0 / kLn2) / (s(k) + floor));
    } else {
        // Total power is strictly decreasing in v; bracket then bisect.
        double v_hi = 1.0 / (kLn2 * (floor + s.minCoeff()));
        int guard = 0;
        while (alloc_at(v_hi).sum() > pb && guard++ < 200) v_hi *= 2.0;
        double v_lo = v_hi;
        guard = 0;
        while (alloc_at(v_lo).sum() < pb && guard++ < 2000) v_lo *= 0.5;
        for (int it = 0; it < 200; ++it) {
            ++iters;
            const double mid = 0.5 * (v_lo + v_hi);
            if (alloc_at(mid).sum() > pb) v_lo = mid; else v_hi = mid;
        }
        v = 0.5 * (v_lo + v_hi);
        // Resolve the active set at the bisected v, then pin the water level
        // analytically so the power budget holds exactly.
        int na = 0;
        double sum_s = 0;
        for (int k = 0; k < r; ++k) {
            if (1.0 / (v * kLn2) - s(k) > floor) {
                ++na;
                sum_s += s(k);
            }
        }
        p = Eigen::VectorXd::Constant(m, floor);
        if (na > 0) {
            const double level = (pb - (m - na) * floor + sum_s) / na;
            for (int k = 0; k < r; ++k) {
                const double cand = level - s(k);
                if (cand > floor) p(k) = cand;
            }
            const double drift = pb - p.sum();
            p(0) += drift;
            v = 1.0 / (level * kLn2);
        }
    }

    SolveOutcome out;
    out.scenario = scenario_index(CrbMetric::MaxEig);
    out.allocation = p;
    out.q = hermitianize(ch.svd_v * p.asDiagonal() * ch.svd_v.adjoint());
    out.rate = rate_alloc(p, g2, params.noise_comm);
    out.crb = crb_extended_alloc(p, params, CrbMetric::MaxEig);
    out.status = SolveStatus::Optimal;
    out.iterations = iters;

    // Per-mode floor multipliers; their sum doubles as the reported
    // constraint multiplier.
    double mu_total = 0, stat = 0;
    for (int k = 0; k < m; ++k) {
        const double grad = k < r ? (1.0 / kLn2) / (s(k) + p(k)) : 0.0;
        const double mu_k = std::max(v - grad, 0.0);
        mu_total += mu_k;
        stat = std::max(stat, std::abs(grad + mu_k - v));
        if (p(k) > floor * (1.0 + 1e-9)) stat = std::max(stat, mu_k);
    }
    out.duals = {mu_total, v};
    out.constraint_active = p.minCoeff() <= floor * (1.0 + 1e-9);
    const double rscale = std::max(1.0, std::abs(out.rate));
    out.kkt.stationarity = stat / std::max(v, 1.0);
    out.kkt.feasibility_power = std::max(0.0, p.sum() - pb) / pb;
    out.kkt.feasibility_crb = std::max(0.0, (floor - p.minCoeff()) / floor);
    out.kkt.comp_slack = v * std::abs(p.sum() - pb) / pb / rscale;
    return out;
}

SolveOutcome solve_logdet(const ChannelSet& ch, const SystemParams& params, double ln_gamma4,
                          const ExtendedSolveOptions& opts) {
    const int m = params.m_tx;
    const int r = ch.rank_r;
    const double pb = params.power;
    const double gt = gamma_tilde_logdet(ln_gamma4, params);
    const Eigen::VectorXd g2 = ch.gains2();
    const Eigen::VectorXd s = noise_floors(ch, params.noise_comm);

    const double max_logdet = m * std::log(pb / m);
    const double atol = 1e-12 * std::max(1.0, std::abs(max_logdet));
    if (gt > max_logdet + atol) return infeasible_outcome(CrbMetric::LogDet);
    if (gt >= max_logdet - atol) {
        const Eigen::VectorXd p = Eigen::VectorXd::Constant(m, pb / m);
        return pack_extended(ch, params, CrbMetric::LogDet, p, {1.0, 1.0}, true,
                             SolveStatus::Optimal, 0, 0.0);
    }

    if (r == m) {
        const WaterfillResult wf = waterfill(g2, params.noise_comm, pb);
        if (wf.p.minCoeff() > 0) {
            double logdet = 0;
            for (int k = 0; k < m; ++k) logdet += std::log(wf.p(k));
            if (logdet >= gt) {
                const double v = 1.0 / (wf.water_level * kLn2);
                return pack_extended(ch, params, CrbMetric::LogDet, wf.p, {0.0, v}, false,
                                     SolveStatus::Optimal, 0, 0.0);
            }
        }
    }

    // Positive root of v p^2 + (v s - mu - 1/ln2) p - mu s = 0, written to
    // avoid cancellation for either sign of the linear coefficient.
    auto quad_root = [](double v, double mu, double s_k) {
        if (mu <= 0) return std::max(1.0 / (v * kLn2) - s_k, 0.0);
        const double bq = v * s_k - mu - 1.0 / kLn2;
        const double disc = std::sqrt(bq * bq + 4.0 * v * mu * s_k);
        if (bq <= 0) return (-bq + disc) / (2.0 * v);
        return 2.0 * mu * s_k / (bq + disc);
    };

    ExtProblem prob;
    prob.feasible = [&](const Eigen::VectorXd& p) {
        if (p.minCoeff() <= 0) return false;
        double logdet = 0;
        for (int k = 0; k < p.size(); ++k) logdet += std::log(p(k));
        return logdet >= gt && p.sum() <= pb * (1.0 + 1e-12);
    };
    auto alloc_at = [&](double mu, double v) {
        Eigen::VectorXd p(m);
        for (int k = 0; k < r; ++k) p(k) = quad_root(v, mu, s(k));
        for (int k = r; k < m; ++k) p(k) = mu / v;
        return p;
    };
    prob.eval = [&](double mu, double v) {
        ExtEval ev;
        ev.p = alloc_at(mu, v);
        double g = -mu * gt + v * pb;
        double logdet = 0, total = 0;
        for (int k = 0; k < m; ++k) {
            const double p = ev.p(k);
            if (k < r) g += std::log2(1.0 + g2(k) * p / params.noise_comm);
            if (p > 0) {
                g += mu * std::log(p) - v * p;
                logdet += std::log(p);
                total += p;
            } else {
                logdet = -kInf;
            }
        }
        ev.g = g;
        ev.subgrad = Eigen::Vector2d(logdet - gt, -(total - pb));
        return ev;
    };
    prob.kkt_system = [&](double mu, double v, Eigen::Vector2d& f, Eigen::Matrix2d& jac,
                          Eigen::VectorXd& p) {
        p = alloc_at(mu, v);
        f.setZero();
        jac.setZero();
        for (int k = 0; k < m; ++k) {
            const double pk = p(k);
            double dp_dmu, dp_dv;
            if (k < r) {
                const double dpsi =
                    -(1.0 / kLn2) / ((s(k) + pk) * (s(k) + pk)) - mu / (pk * pk);
                dp_dmu = -(1.0 / pk) / dpsi;
                dp_dv = 1.0 / dpsi;
            } else {
                dp_dmu = 1.0 / v;
                dp_dv = -mu / (v * v);
            }
            f(0) += std::log(pk);
            f(1) += pk;
            jac(0, 0) += dp_dmu / pk;
            jac(0, 1) += dp_dv / pk;
            jac(1, 0) += dp_dmu;
            jac(1, 1) += dp_dv;
        }
        f(0) -= gt;
        f(1) -= pb;
    };

    const Eigen::VectorXd p_eq = Eigen::VectorXd::Constant(m, pb / m);
    const double rate_eq = rate_alloc(p_eq, g2, params.noise_comm);
    DualSearchResult res =
        dual_search_2d(prob, opts, p_eq, rate_eq, g2, params.noise_comm, pb, m);

    Eigen::Vector2d x = res.x_best;
    Eigen::VectorXd p = res.p_best;
    const bool polished = newton_polish(prob, x, p, std::max(1.0, std::abs(gt)), pb);
    if (polished) {
        p = blend_feasible(p, prob, pb, m);
        const double rp = rate_alloc(p, g2, params.noise_comm);
        if (rp >= res.rate_best) res.rate_best = rp; else p = res.p_best;
        res.g_best = std::min(res.g_best, prob.eval(x(0), x(1)).g);
    } else {
        p = res.p_best;
    }

    const double gap = res.g_best - res.rate_best;
    const SolveStatus status = (res.converged || polished || gap <= opts.gap_tol)
                                   ? SolveStatus::Optimal
                                   : SolveStatus::MaxIterations;
    SolveOutcome out = pack_extended(ch, params, CrbMetric::LogDet, p,
                                     {x(0), x(1)}, x(0) > 1e-8, status, res.iters, gap);
    double logdet = 0;
    for (int k = 0; k < m; ++k) logdet += std::log(p(k));
    const double gscale = std::max(1.0, std::abs(gt));
    out.kkt.feasibility_crb = std::max(0.0, (gt - logdet) / gscale);
    out.kkt.comp_slack = std::max(x(0) * std::abs(logdet - gt) / gscale,
                                  x(1) * std::abs(p.sum() - pb) / pb) /
                         std::max(1.0, std::abs(out.rate));
    return out;
}

PowerAllocation asymptotic_allocation(const ChannelSet& ch, const SystemParams& params,
                                      CrbMetric metric, double gamma) {
    const int m = params.m_tx;
    const int r = ch.rank_r;
    const double pb = params.power;
    PowerAllocation alloc;
    alloc.metric = metric;
    alloc.rank_r = r;
    alloc.p = Eigen::VectorXd::Zero(m);

    double p_sense = 0;
    switch (metric) {
        case CrbMetric::Trace:
            p_sense = (m - r) / gamma_tilde_trace(gamma, params);
            break;
        case CrbMetric::MaxEig:
            p_sense = gamma_tilde_maxeig(gamma, params);
            break;
        case CrbMetric::LogDet:
            p_sense = 0;
            break;
        case CrbMetric::PointAngle:
            throw std::invalid_argument("asymptotic_allocation: extended metrics only");
    }
    const double p_comm = (pb - (m - r) * p_sense) / r;
    for (int k = 0; k < m; ++k) alloc.p(k) = k < r ? p_comm : p_sense;
    return alloc;
}

bool check_ordering(const PowerAllocation& alloc, double budget) {
    const double slack = 1e-8 * budget;
    const int m = static_cast<int>(alloc.p.size());
    for (int k = 0; k + 1 < m; ++k) {
        if (alloc.p(k) < alloc.p(k + 1) - slack) return false;
    }
    for (int k = alloc.rank_r; k < m; ++k) {
        if (std::abs(alloc.p(k) - alloc.p(alloc.rank_r)) > slack) return false;
    }
    return alloc.p(m - 1) > 0;
}

}  // namespace crr
