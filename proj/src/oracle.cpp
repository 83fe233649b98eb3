// SPDX-License-Identifier: Apache-2.0

#include "crr/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "crr/boundary.hpp"
#include "crr/metrics.hpp"
#include "crr/rng.hpp"

namespace crr {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Direct feasibility for a diagonal allocation: metric value against the
// bound plus the power budget, nothing from the solver path.
struct DiagFeasibility {
    const SystemParams& params;
    CrbMetric metric;
    double gamma;
    double budget;

    bool operator()(const Eigen::VectorXd& p) const {
        if (p.minCoeff() < 0 || p.sum() > budget * (1.0 + 1e-15)) return false;
        const double crb = crb_extended_alloc(p, params, metric);
        if (metric == CrbMetric::LogDet) return crb <= gamma;
        return crb <= gamma;
    }
};

template <typename Feas>
void scan_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int steps,
              const Feas& feas, const std::function<double(const Eigen::VectorXd&)>& rate_of,
              Eigen::VectorXd& best, double& best_rate, long* feasible_count) {
    const int dim = static_cast<int>(lo.size());
    Eigen::VectorXi idx = Eigen::VectorXi::Zero(dim);
    Eigen::VectorXd x(dim);
    while (true) {
        for (int d = 0; d < dim; ++d) {
            x(d) = steps == 0 ? lo(d) : lo(d) + (hi(d) - lo(d)) * idx(d) / steps;
        }
        if (feas(x)) {
            if (feasible_count) ++*feasible_count;
            const double r = rate_of(x);
            if (r > best_rate) {
                best_rate = r;
                best = x;
            }
        }
        int d = 0;
        while (d < dim && ++idx(d) > steps) {
            idx(d) = 0;
            ++d;
        }
        if (d == dim) break;
    }
}

}  // namespace

OracleReport grid_oracle_diagonal(const ChannelSet& ch, const SystemParams& params,
                                  CrbMetric metric, double gamma, int steps) {
    if (params.m_tx > 3)
        throw std::invalid_argument("grid_oracle_diagonal: M <= 3 only");
    if (metric == CrbMetric::PointAngle)
        throw std::invalid_argument("grid_oracle_diagonal: extended metrics only");

    const int m = params.m_tx;
    const double budget = params.power;
    const Eigen::VectorXd g2 = ch.gains2();
    const DiagFeasibility feas{params, metric, gamma, budget};
    auto rate_of = [&](const Eigen::VectorXd& p) {
        return rate_alloc(p, g2, params.noise_comm);
    };

    OracleReport rep;
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(m, budget);

    const int level0 = m <= 2 ? steps : std::min(steps, 200);
    scan_box(lo, hi, level0, feas, rate_of, rep.best_point, rep.best_rate,
             &rep.feasible_count);
    double cell = budget / level0;
    if (rep.feasible_count == 0) return rep;

    // Zoom passes around the incumbent cell.
    const int zoom_steps = 40;
    for (int level = 0; level < 5; ++level) {
        for (int d = 0; d < m; ++d) {
            lo(d) = std::max(rep.best_point(d) - 2.0 * cell, 0.0);
            hi(d) = std::min(rep.best_point(d) + 2.0 * cell, budget);
        }
        scan_box(lo, hi, zoom_steps, feas, rate_of, rep.best_point, rep.best_rate, nullptr);
        cell = 4.0 * cell / zoom_steps;
    }
    rep.grid_resolution = cell;
    rep.max_kkt_violation =
        std::max(0.0, rep.best_point.sum() - budget) / budget;
    return rep;
}

namespace {

// Closed 2x2 forms for the Hermitian oracle, parameterized by
// x = (q11, q22, re12, im12).
struct Herm2Ctx {
    // point-target pieces (antenna basis)
    cplx a1, a2, d1, d2;
    double nb2 = 0, ndb2 = 0, alpha2 = 0, cpi = 0, noise_s = 0;
    Eigen::Matrix2cd k_over_noise;  // H^H H / sigma_c^2
    // extended pieces (eigenbasis)
    double g1 = 0, g2 = 0, noise_c = 1, ns = 0;

    static Herm2Ctx make(const ChannelSet& ch, const SystemParams& params) {
        Herm2Ctx c;
        const SteeringSet s = build_steering(params);
        c.a1 = s.a(0);
        c.a2 = s.a(1);
        c.d1 = s.a_dot(0);
        c.d2 = s.a_dot(1);
        c.nb2 = s.b_norm2();
        c.ndb2 = s.b_dot_norm2();
        c.alpha2 = std::norm(params.reflect_coeff);
        c.cpi = params.cpi_len;
        c.noise_s = params.noise_sense;
        c.noise_c = params.noise_comm;
        c.ns = params.n_rx_sense;
        c.k_over_noise =
            (ch.h_comm.adjoint() * ch.h_comm / params.noise_comm).eval();
        const Eigen::VectorXd gains = ch.gains2();
        c.g1 = gains(0);
        c.g2 = ch.rank_r > 1 ? gains(1) : 0.0;
        return c;
    }

    // tr(u* w^T Q) = sum_ij w_i Q_ij conj(u_j) for Q = [[q11, z],[conj(z), q22]].
    static cplx quad(const Eigen::Vector4d& x, cplx u1, cplx u2, cplx w1, cplx w2) {
        const cplx z(x(2), x(3));
        return w1 * std::conj(u1) * x(0) + w2 * std::conj(u2) * x(1) +
               w1 * std::conj(u2) * z + w2 * std::conj(u1) * std::conj(z);
    }

    double crb_point(const Eigen::Vector4d& x) const {
        const double t_aa = nb2 * quad(x, a1, a2, a1, a2).real();
        const double t_dd =
            nb2 * quad(x, d1, d2, d1, d2).real() + ndb2 * quad(x, a1, a2, a1, a2).real();
        const cplx t_da = nb2 * quad(x, d1, d2, a1, a2);
        const double denom = t_dd * t_aa - std::norm(t_da);
        const double scale = std::max({t_dd * t_aa, std::norm(t_da), 1e-300});
        if (denom <= 1e-18 * scale) return kInf;
        return noise_s * t_aa / (2.0 * alpha2 * cpi * denom);
    }

    double crb_ext(const Eigen::Vector4d& x, CrbMetric metric) const {
        const double det = x(0) * x(1) - (x(2) * x(2) + x(3) * x(3));
        const double tr = x(0) + x(1);
        if (det <= 0 || tr <= 0) return kInf;
        switch (metric) {
            case CrbMetric::Trace:
                return noise_s * ns / cpi * tr / det;
            case CrbMetric::MaxEig: {
                const double lam_max = 0.5 * (tr + std::sqrt(std::max(tr * tr - 4 * det, 0.0)));
                return noise_s / cpi * lam_max / det;  // 1/lam_min = lam_max/det
            }
            case CrbMetric::LogDet:
                return 2.0 * ns * std::log(noise_s / cpi) - ns * std::log(det);
            default:
                return kInf;
        }
    }

    double rate_point(const Eigen::Vector4d& x) const {
        // det(I + K Q / noise) for the 2x2 covariance
        const cplx z(x(2), x(3));
        Eigen::Matrix2cd q;
        q << x(0), z, std::conj(z), x(1);
        const Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity() + k_over_noise * q;
        const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
        return std::log2(std::max(det, 1e-300));
    }

    double rate_ext(const Eigen::Vector4d& x) const {
        const double det = (1.0 + g1 * x(0) / noise_c) * (1.0 + g2 * x(1) / noise_c) -
                           g1 * g2 * (x(2) * x(2) + x(3) * x(3)) / (noise_c * noise_c);
        return std::log2(std::max(det, 1e-300));
    }
};

}  // namespace

OracleReport grid_oracle_hermitian(const ChannelSet& ch, const SystemParams& params,
                                   CrbMetric metric, double gamma, int steps) {
    if (params.m_tx != 2)
        throw std::invalid_argument("grid_oracle_hermitian: M = 2 only");

    const double budget = params.power;
    const Herm2Ctx ctx = Herm2Ctx::make(ch, params);
    const bool point = metric == CrbMetric::PointAngle;

    auto feasible = [&](const Eigen::VectorXd& xv) {
        const Eigen::Vector4d x = xv;
        if (x(0) < 0 || x(1) < 0 || x(0) + x(1) > budget * (1.0 + 1e-15)) return false;
        if (x(0) * x(1) - (x(2) * x(2) + x(3) * x(3)) < 0) return false;
        const double crb = point ? ctx.crb_point(x) : ctx.crb_ext(x, metric);
        return crb <= gamma;
    };
    auto rate_of = [&](const Eigen::VectorXd& xv) {
        const Eigen::Vector4d x = xv;
        return point ? ctx.rate_point(x) : ctx.rate_ext(x);
    };

    OracleReport rep;
    Eigen::VectorXd lo(4), hi(4);
    lo << 0, 0, -budget / 2, -budget / 2;
    hi << budget, budget, budget / 2, budget / 2;
    scan_box(lo, hi, steps, feasible, rate_of, rep.best_point, rep.best_rate,
             &rep.feasible_count);
    if (rep.feasible_count == 0) return rep;

    // Coordinate descent from the best cell: the feasible slice along any
    // coordinate is an interval (all constraints are convex) and the rate is
    // concave along it, so interval bisection plus golden section is exact.
    const double tol = budget * 1e-9;
    Eigen::VectorXd x = rep.best_point;
    for (int sweep = 0; sweep < 3; ++sweep) {
        for (int d = 0; d < 4; ++d) {
            auto feas_at = [&](double val) {
                Eigen::VectorXd y = x;
                y(d) = val;
                return feasible(y);
            };
            double in_lo = x(d), in_hi = x(d);
            double out = hi(d);
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (in_hi + out);
                if (feas_at(mid)) in_hi = mid; else out = mid;
            }
            out = lo(d);
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (in_lo + out);
                if (feas_at(mid)) in_lo = mid; else out = mid;
            }
            const double gr = 0.6180339887498949;
            double a = in_lo, b = in_hi;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            auto val_at = [&](double v) {
                Eigen::VectorXd y = x;
                y(d) = v;
                return rate_of(y);
            };
            double f1 = val_at(x1), f2 = val_at(x2);
            while (b - a > tol) {
                if (f1 < f2) {
                    a = x1; x1 = x2; f1 = f2;
                    x2 = a + gr * (b - a); f2 = val_at(x2);
                } else {
                    b = x2; x2 = x1; f2 = f1;
                    x1 = b - gr * (b - a); f1 = val_at(x1);
                }
            }
            const double cand = 0.5 * (a + b);
            if (feas_at(cand) && val_at(cand) >= rate_of(x)) x(d) = cand;
        }
    }
    // Coordinate moves jam where the bound constraint is active; random
    // direction line searches do not. Feasible slices stay intervals and the
    // rate stays concave along any line, so each search is exact.
    NormalStream dir_rng(0x9e3779b97f4a7c15ull);
    const double t_max = 4.0 * budget;
    for (int k = 0; k < 400; ++k) {
        Eigen::Vector4d dir;
        for (int i = 0; i < 4; ++i) dir(i) = dir_rng.next();
        dir.normalize();
        auto feas_t = [&](double t) { return feasible((x + t * dir).eval()); };
        auto rate_t = [&](double t) { return rate_of((x + t * dir).eval()); };
        double t_hi = 0, t_lo = 0, out_t = t_max;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (t_hi + out_t);
            if (feas_t(mid)) t_hi = mid; else out_t = mid;
        }
        out_t = -t_max;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (t_lo + out_t);
            if (feas_t(mid)) t_lo = mid; else out_t = mid;
        }
        const double gr = 0.6180339887498949;
        double a = t_lo, b = t_hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = rate_t(x1), f2 = rate_t(x2);
        while (b - a > tol) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a); f2 = rate_t(x2);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a); f1 = rate_t(x1);
            }
        }
        const double t_star = 0.5 * (a + b);
        if (feas_t(t_star) && rate_t(t_star) > rate_of(x)) x += t_star * dir;
    }

    if (feasible(x) && rate_of(x) > rep.best_rate) {
        rep.best_rate = rate_of(x);
        rep.best_point = x;
    }

    // The optimum can sit on the rank-1 surface with the bound active, a
    // sliver no fixed grid resolves. Every bound here is homogeneous of
    // degree -1 in Q, so any feasible point rescales onto trace = budget with
    // a higher rate; the refinement therefore walks (q11, rho) on that face,
    // q12 = rho sqrt(q11 q22) e^{j phi}, and resolves phi exactly per point.
    {
        const double pi = 3.14159265358979323846;
        auto to_x = [&](double q11, double rho, double phi) {
            const double q22 = budget - q11;
            const double m = rho * std::sqrt(std::max(q11 * q22, 0.0));
            return Eigen::Vector4d(q11, q22, m * std::cos(phi), m * std::sin(phi));
        };
        auto crb_of = [&](const Eigen::Vector4d& v) {
            return point ? ctx.crb_point(v) : ctx.crb_ext(v, metric);
        };
        // best rate over phi at fixed (q11, rho); -inf when no phi is feasible
        auto resolve_phi = [&](double q11, double rho, Eigen::Vector4d& arg) {
            double best_r = -kInf;
            double best_phi = 0;
            const int n_phi = 128;
            double min_crb = kInf, min_phi = 0;
            for (int k = 0; k < n_phi; ++k) {
                const double phi = -pi + 2 * pi * k / n_phi;
                const Eigen::Vector4d cand = to_x(q11, rho, phi);
                const double crb = crb_of(cand);
                if (crb < min_crb) {
                    min_crb = crb;
                    min_phi = phi;
                }
                if (feasible(cand)) {
                    const double r = rate_of(cand);
                    if (r > best_r) {
                        best_r = r;
                        best_phi = phi;
                    }
                }
            }
            // thin feasibility window: chase the bound minimum over phi
            if (best_r == -kInf) {
                const double gr = 0.6180339887498949;
                double a = min_phi - 2 * pi / n_phi, b = min_phi + 2 * pi / n_phi;
                double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
                double f1 = crb_of(to_x(q11, rho, x1)), f2 = crb_of(to_x(q11, rho, x2));
                for (int it = 0; it < 80; ++it) {
                    if (f1 > f2) {
                        a = x1; x1 = x2; f1 = f2;
                        x2 = a + gr * (b - a); f2 = crb_of(to_x(q11, rho, x2));
                    } else {
                        b = x2; x2 = x1; f2 = f1;
                        x1 = b - gr * (b - a); f1 = crb_of(to_x(q11, rho, x1));
                    }
                }
                best_phi = 0.5 * (a + b);
                const Eigen::Vector4d cand = to_x(q11, rho, best_phi);
                if (!feasible(cand)) return -kInf;
                best_r = rate_of(cand);
            }
            // widen to the better edge of the feasible window
            for (const double sgn : {-1.0, 1.0}) {
                double in = best_phi, out = best_phi + sgn * 2 * pi / n_phi;
                if (feasible(to_x(q11, rho, out))) {
                    in = out;
                    out = best_phi + sgn * 4 * pi / n_phi;
                }
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (in + out);
                    if (feasible(to_x(q11, rho, mid))) in = mid; else out = mid;
                }
                // golden inside [best_phi, in]
                const double gr = 0.6180339887498949;
                double a = std::min(best_phi, in), b = std::max(best_phi, in);
                double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
                auto val = [&](double phi) {
                    const Eigen::Vector4d cand = to_x(q11, rho, phi);
                    return feasible(cand) ? rate_of(cand) : -kInf;
                };
                double f1 = val(x1), f2 = val(x2);
                for (int it = 0; it < 60; ++it) {
                    if (f1 < f2) {
                        a = x1; x1 = x2; f1 = f2;
                        x2 = a + gr * (b - a); f2 = val(x2);
                    } else {
                        b = x2; x2 = x1; f2 = f1;
                        x1 = b - gr * (b - a); f1 = val(x1);
                    }
                }
                const double phi_c = 0.5 * (a + b);
                const double r = val(phi_c);
                if (r > best_r) {
                    best_r = r;
                    best_phi = phi_c;
                }
            }
            arg = to_x(q11, rho, best_phi);
            return best_r;
        };

        // seed: incumbent rescaled onto the full-power face
        double c_q11 = 0.5 * budget, c_rho = 0.5;
        {
            Eigen::Vector4d b0 = rep.best_point;
            const double tr = b0(0) + b0(1);
            if (tr > 0) {
                b0 *= budget / tr;
                const double mag = std::sqrt(std::max(b0(0) * b0(1), 0.0));
                c_q11 = b0(0);
                c_rho = mag > 0 ? std::min(std::hypot(b0(2), b0(3)) / mag, 1.0) : 0.0;
            }
        }
        double w_q11 = 0.25 * budget, w_rho = 0.5;
        for (int level = 0; level < 18; ++level) {
            double next_q11 = c_q11, next_rho = c_rho;
            const int n_side = 8;
            for (int i = -n_side; i <= n_side; ++i) {
                for (int j = -n_side; j <= n_side; ++j) {
                    const double q11 =
                        std::clamp(c_q11 + w_q11 * i / n_side, 0.0, budget);
                    const double rho = std::clamp(c_rho + w_rho * j / n_side, 0.0, 1.0);
                    Eigen::Vector4d arg;
                    const double r = resolve_phi(q11, rho, arg);
                    if (r > rep.best_rate) {
                        rep.best_rate = r;
                        rep.best_point = arg;
                        next_q11 = q11;
                        next_rho = rho;
                    }
                }
            }
            c_q11 = next_q11;
            c_rho = next_rho;
            w_q11 *= 0.42;
            w_rho *= 0.42;
        }
    }
    rep.grid_resolution = tol;
    rep.max_kkt_violation =
        std::max(0.0, rep.best_point(0) + rep.best_point(1) - budget) / budget;
    return rep;
}

MleCheckResult mle_variance_check(const SystemParams& params, const Eigen::MatrixXcd& q,
                                  int trials, std::uint64_t seed) {
    const int m = params.m_tx;
    const int ns = params.n_rx_sense;
    const int l = params.cpi_len;
    const double theta0 = params.target_angle;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitianize(q));
    const Eigen::MatrixXcd sqrt_q = es.eigenvectors() *
                                    es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                                    es.eigenvectors().adjoint();
    const Eigen::MatrixXcd a_resp = point_target_response(params);
    const double noise_sd = std::sqrt(params.noise_sense);

    NormalStream rng(seed);
    std::vector<double> estimates;
    estimates.reserve(trials);

    const int grid_n = 1024;
    const double span = kPi * 0.499;

    for (int t = 0; t < trials; ++t) {
        Eigen::MatrixXcd g(m, l);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < l; ++j) g(i, j) = rng.next_cscg();
        const Eigen::MatrixXcd x = sqrt_q * g;
        Eigen::MatrixXcd y = a_resp * x;
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < l; ++j) y(i, j) += noise_sd * rng.next_cscg();

        const Eigen::MatrixXcd t_mat = y * x.adjoint();  // N_s x M
        const Eigen::MatrixXcd s_mat = x * x.adjoint();  // M x M

        // Concentrated likelihood over the reflection coefficient.
        auto objective = [&](double theta) {
            const Eigen::VectorXcd a = steering(theta, m);
            const Eigen::VectorXcd b = steering(theta, ns);
            const cplx num = (b.adjoint() * t_mat * a.conjugate())(0, 0);
            const double den = (a.transpose() * s_mat * a.conjugate())(0, 0).real();
            return std::norm(num) / std::max(den, 1e-300);
        };

        double best_theta = 0, best_val = -1;
        for (int i = 0; i < grid_n; ++i) {
            const double theta = -span + 2 * span * i / (grid_n - 1);
            const double val = objective(theta);
            if (val > best_val) {
                best_val = val;
                best_theta = theta;
            }
        }
        const double gr = 0.6180339887498949;
        double a = best_theta - 2 * span / grid_n, b = best_theta + 2 * span / grid_n;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = objective(x1), f2 = objective(x2);
        while (b - a > 1e-10) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a); f2 = objective(x2);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a); f1 = objective(x1);
            }
        }
        estimates.push_back(0.5 * (a + b) - theta0);
    }

    double mean = 0;
    for (double e : estimates) mean += e;
    mean /= trials;
    double var = 0;
    for (double e : estimates) var += (e - mean) * (e - mean);
    var /= std::max(trials - 1, 1);

    return {var, crb_point_angle(q, params)};
}

std::vector<OracleCheckCase> oracle_check_suite(
    const SystemParams& base, int instances_per_scenario, int steps, double tol_bits,
    const std::function<double(int scenario, double rate)>& perturb) {
    std::vector<OracleCheckCase> out;
    for (int scenario = 1; scenario <= 4; ++scenario) {
        for (int i = 0; i < instances_per_scenario; ++i) {
            SystemParams p = base;
            p.m_tx = 2;
            p.n_rx_comm = 2;
            p.n_rx_sense = 3;
            p.cpi_len = 32;
            p.reflect_coeff = cplx(1.0, 0.0);
            p.power = 3.0 + (i % 5);
            p.rician_k = (i % 3 == 0) ? 0.0 : 5.0;
            p.target_angle = -kPi / 3.0 + std::fmod(0.617 * (i + 1), 2.0 * kPi / 3.0);
            p.seed = base.seed + 1000 * scenario + i;
            const ChannelSet ch = rician_channel(p, p.los_aoa, p.los_aod);

            const auto [crb_min, crb_slack] = feasibility_range(scenario, ch, p);
            double gamma;
            if (scenario == 4) {
                const double hi = std::isfinite(crb_slack) ? crb_slack
                                                           : crb_min + std::log(50.0);
                gamma = crb_min + 0.4 * (hi - crb_min);
            } else {
                const double hi =
                    std::min(std::isfinite(crb_slack) ? crb_slack : crb_min * 50.0,
                             crb_min * 50.0);
                gamma = std::exp(std::log(crb_min) +
                                 0.4 * (std::log(hi) - std::log(crb_min)));
            }

            OracleCheckCase c;
            c.scenario = scenario;
            c.seed = p.seed;
            c.gamma = gamma;

            const SolveOutcome sol = solve_scenario(scenario, ch, p, gamma);
            c.solver_rate = sol.rate;
            if (perturb) c.solver_rate = perturb(scenario, c.solver_rate);

            const CrbMetric metric = metric_from_scenario(scenario);
            const OracleReport rep =
                scenario == 1
                    ? grid_oracle_hermitian(ch, p, metric, gamma, std::min(steps, 48))
                    : grid_oracle_diagonal(ch, p, metric, gamma, steps);
            c.oracle_rate = rep.best_rate;
            c.deviation_bits = std::abs(c.solver_rate - c.oracle_rate);
            c.pass = std::isfinite(c.deviation_bits) && c.deviation_bits <= tol_bits;
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace crr
