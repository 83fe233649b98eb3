// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_METRICS_HPP
#define CRR_METRICS_HPP

#include <Eigen/Dense>

#include "crr/channel.hpp"
#include "crr/system.hpp"

namespace crr {

// Achievable rate log2 det(I + H Q H^H / sigma_c^2) in bits per channel use.
double rate(const Eigen::MatrixXcd& q, const ChannelSet& ch, const SystemParams& params);

// Rate of a diagonal allocation over the channel eigenmodes.
double rate_alloc(const Eigen::VectorXd& p, const Eigen::VectorXd& gains2, double noise);

// Quadratic forms of Q against the point-target steering set:
//   t_aa = tr(A^H A Q),  t_dd = tr(Adot^H Adot Q),  t_da = tr(Adot^H A Q),
// with A = b a^T and Adot = b adot^T + bdot a^T.
struct FisherTerms {
    double t_aa = 0;
    double t_dd = 0;
    cplx t_da{0, 0};
};

FisherTerms point_fisher_terms(const Eigen::MatrixXcd& q, const SteeringSet& s);

// Angle-estimation variance bound for the point target. Returns +inf when the
// Fisher denominator degenerates (parameter not estimable).
double crb_point_angle(const Eigen::MatrixXcd& q, const SteeringSet& s,
                       const SystemParams& params);
double crb_point_angle(const Eigen::MatrixXcd& q, const SystemParams& params);

// Extended-target bound for the chosen scalarization. LogDet values are
// natural-log domain throughout: the linear determinant underflows double for
// realistic antenna counts. Returns +inf for singular Q.
double crb_extended(const Eigen::MatrixXcd& q, const SystemParams& params, CrbMetric metric);

// Extended-target bound evaluated directly on the eigenmode powers.
double crb_extended_alloc(const Eigen::VectorXd& p, const SystemParams& params, CrbMetric metric);

// Normalized constraint levels used by the solvers.
double gamma_tilde_point(double gamma1, const SystemParams& params);   // 2 G L |alpha|^2 / sigma_s^2
double gamma_tilde_trace(double gamma2, const SystemParams& params);   // L G / (sigma_s^2 N_s)
double gamma_tilde_maxeig(double gamma3, const SystemParams& params);  // sigma_s^2 / (L G)
double gamma_tilde_logdet(double ln_gamma4, const SystemParams& params);

// 2x2 reformulation of the point-target constraint: PSD of this matrix is
// equivalent to crb_point_angle(q) <= gamma1 via a Schur complement.
Eigen::Matrix2cd point_crb_constraint_matrix(const Eigen::MatrixXcd& q, const SteeringSet& s,
                                             double gamma_tilde1);

// Hermitian hygiene helpers.
Eigen::MatrixXcd hermitianize(const Eigen::MatrixXcd& m);
bool is_hermitian_psd(const Eigen::MatrixXcd& q, double herm_tol = 1e-12,
                      double eig_tol = 1e-10);

// Projection onto the Hermitian PSD cone (negative eigenvalues clipped).
Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& q);

}  // namespace crr

#endif
