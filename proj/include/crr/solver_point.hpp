// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_SOLVER_POINT_HPP
#define CRR_SOLVER_POINT_HPP

#include <Eigen/Dense>
#include <optional>

#include "crr/channel.hpp"
#include "crr/outcome.hpp"
#include "crr/system.hpp"

namespace crr {

// Dual variables of the angle-CRB-constrained rate maximization: lambda for
// the power constraint and the Hermitian 2x2 block
//   Z_P = [alpha_d, beta_d + j gamma_d; beta_d - j gamma_d, nu_d]
// for the reformulated CRB constraint.
struct DualPoint {
    double lambda = 0;
    double alpha_d = 0;
    double beta_d = 0;
    double gamma_d = 0;
    double nu_d = 0;

    Eigen::Matrix2cd z_matrix() const {
        Eigen::Matrix2cd z;
        z(0, 0) = alpha_d;
        z(0, 1) = cplx(beta_d, gamma_d);
        z(1, 0) = cplx(beta_d, -gamma_d);
        z(1, 1) = nu_d;
        return z;
    }

    Eigen::VectorXd to_vec() const {
        Eigen::VectorXd v(5);
        v << lambda, alpha_d, beta_d, gamma_d, nu_d;
        return v;
    }

    static DualPoint from_vec(const Eigen::VectorXd& v) {
        return DualPoint{v(0), v(1), v(2), v(3), v(4)};
    }
};

// lambda*I minus the weighted steering outer products; rank deficiency of the
// subtracted part is at most 2, so rank(C) >= M - 2.
Eigen::MatrixXcd build_c_matrix(const DualPoint& dual, const SteeringSet& s);

struct DualEvalResult {
    bool bounded = false;
    double g = kInf;               // dual function value
    Eigen::MatrixXcd q_star;       // minimal-norm maximizer of the Lagrangian
    Eigen::VectorXd subgrad;       // d g / d(lambda, alpha, beta, gamma, nu)
    Eigen::VectorXcd cut_vector;   // violating direction when unbounded
};

// Evaluates the dual function by diagonalizing the composite channel
// H_c U1 Delta^{-1/2} and water-filling against a unit price. bounded=false
// signals an ellipsoid constraint cut, not an error.
DualEvalResult dual_eval(const DualPoint& dual, const ChannelSet& ch,
                         const SystemParams& params, const SteeringSet& s,
                         double gamma_tilde1);

struct PointSolveOptions {
    double gap_tol = 1e-6;
    long max_iters = 50000;
    double init_radius = 1e3;
    double vol_tol = 1e-9;
    std::optional<Eigen::VectorXd> warm_duals;
};

// Angle-CRB-constrained rate maximization for the point target.
SolveOutcome solve_p1(const ChannelSet& ch, const SystemParams& params, double gamma1,
                      const PointSolveOptions& opts = {});

}  // namespace crr

#endif
