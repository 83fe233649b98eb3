// SPDX-License-Identifier: Apache-2.0

#include "crr/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace crr {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

Eigen::MatrixXcd hermitianize(const Eigen::MatrixXcd& m) {
    return 0.5 * (m + m.adjoint());
}

bool is_hermitian_psd(const Eigen::MatrixXcd& q, double herm_tol, double eig_tol) {
    const double scale = std::max(q.norm(), 1.0);
    if ((q - q.adjoint()).norm() > herm_tol * scale) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitianize(q),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -eig_tol * scale;
}

Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& q) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitianize(q));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double rate(const Eigen::MatrixXcd& q, const ChannelSet& ch, const SystemParams& params) {
    const Eigen::MatrixXcd s =
        ch.h_comm * q * ch.h_comm.adjoint() / params.noise_comm;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(s.rows(), s.cols()) + hermitianize(s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    double r = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        r += std::log2(std::max(es.eigenvalues()(i), 1e-300));
    }
    return r;
}

double rate_alloc(const Eigen::VectorXd& p, const Eigen::VectorXd& gains2, double noise) {
    double r = 0;
    const int n = std::min(p.size(), gains2.size());
    for (int k = 0; k < n; ++k) {
        r += std::log2(1.0 + gains2(k) * p(k) / noise);
    }
    return r;
}

FisherTerms point_fisher_terms(const Eigen::MatrixXcd& q, const SteeringSet& s) {
    // With A = b a^T, Adot = b adot^T + bdot a^T and the center-referenced ULA
    // orthogonality b^H bdot = 0:
    //   A^H A       = |b|^2 a* a^T
    //   Adot^H Adot = |b|^2 adot* adot^T + |bdot|^2 a* a^T
    //   Adot^H A    = |b|^2 adot* a^T
    const auto quad = [&q](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) -> cplx {
        // tr(x* y^T Q) = y^T Q x*
        return (y.transpose() * q * x.conjugate())(0, 0);
    };
    FisherTerms t;
    const double nb2 = s.b_norm2();
    t.t_aa = nb2 * quad(s.a, s.a).real();
    t.t_dd = nb2 * quad(s.a_dot, s.a_dot).real() + s.b_dot_norm2() * quad(s.a, s.a).real();
    t.t_da = nb2 * quad(s.a_dot, s.a);
    return t;
}

double crb_point_angle(const Eigen::MatrixXcd& q, const SteeringSet& s,
                       const SystemParams& params) {
    const FisherTerms t = point_fisher_terms(q, s);
    const double denom = t.t_dd * t.t_aa - std::norm(t.t_da);
    const double scale = std::max({t.t_dd * t.t_aa, std::norm(t.t_da), 1e-300});
    if (denom <= 1e-18 * scale) return kInf;
    const double a2 = std::norm(params.reflect_coeff);
    if (a2 <= 0) return kInf;
    return params.noise_sense * t.t_aa / (2.0 * a2 * params.cpi_len * denom);
}

double crb_point_angle(const Eigen::MatrixXcd& q, const SystemParams& params) {
    return crb_point_angle(q, build_steering(params), params);
}

double crb_extended(const Eigen::MatrixXcd& q, const SystemParams& params, CrbMetric metric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitianize(q),
                                                       Eigen::EigenvaluesOnly);
    return crb_extended_alloc(es.eigenvalues(), params, metric);
}

double crb_extended_alloc(const Eigen::VectorXd& p, const SystemParams& params,
                          CrbMetric metric) {
    const double lam_max = p.maxCoeff();
    const double lam_min = p.minCoeff();
    if (lam_min <= 1e-12 * std::max(lam_max, 0.0)) return kInf;

    const double ns = params.n_rx_sense;
    const double l = params.cpi_len;
    const double s2 = params.noise_sense;
    switch (metric) {
        case CrbMetric::Trace: {
            double tr_inv = 0;
            for (int i = 0; i < p.size(); ++i) tr_inv += 1.0 / p(i);
            return s2 * ns / l * tr_inv;
        }
        case CrbMetric::MaxEig:
            return s2 / l / lam_min;
        case CrbMetric::LogDet: {
            double sum_log = 0;
            for (int i = 0; i < p.size(); ++i) sum_log += std::log(p(i));
            return static_cast<double>(p.size()) * ns * std::log(s2 / l) - ns * sum_log;
        }
        case CrbMetric::PointAngle:
            throw std::invalid_argument("crb_extended: PointAngle is not an extended metric");
    }
    return kInf;
}

double gamma_tilde_point(double gamma1, const SystemParams& params) {
    return 2.0 * gamma1 * params.cpi_len * std::norm(params.reflect_coeff) /
           params.noise_sense;
}

double gamma_tilde_trace(double gamma2, const SystemParams& params) {
    return params.cpi_len * gamma2 / (params.noise_sense * params.n_rx_sense);
}

double gamma_tilde_maxeig(double gamma3, const SystemParams& params) {
    return params.noise_sense / (params.cpi_len * gamma3);
}

double gamma_tilde_logdet(double ln_gamma4, const SystemParams& params) {
    return params.m_tx * std::log(params.noise_sense / params.cpi_len) -
           ln_gamma4 / params.n_rx_sense;
}

Eigen::Matrix2cd point_crb_constraint_matrix(const Eigen::MatrixXcd& q, const SteeringSet& s,
                                             double gamma_tilde1) {
    const FisherTerms t = point_fisher_terms(q, s);
    Eigen::Matrix2cd m;
    m(0, 0) = t.t_dd - 1.0 / gamma_tilde1;
    m(0, 1) = t.t_da;
    m(1, 0) = std::conj(t.t_da);
    m(1, 1) = t.t_aa;
    return m;
}

}  // namespace crr
