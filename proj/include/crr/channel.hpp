// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_CHANNEL_HPP
#define CRR_CHANNEL_HPP

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "crr/system.hpp"

namespace crr {

// Half-wavelength ULA steering vector, phase-referenced to the array center:
// entry i (1-based) is exp(j*(2i-1-n)/2 * pi * sin(theta)). Every entry has
// unit modulus and a(theta)^H a_dot(theta) = 0 by symmetry.
Eigen::VectorXcd steering(double theta, int n);
Eigen::VectorXcd steering_deriv(double theta, int n);

inline Eigen::VectorXcd steering_tx(double theta, int m) { return steering(theta, m); }
inline Eigen::VectorXcd steering_rx(double theta, int n) { return steering(theta, n); }
inline Eigen::VectorXcd steering_tx_deriv(double theta, int m) { return steering_deriv(theta, m); }
inline Eigen::VectorXcd steering_rx_deriv(double theta, int n) { return steering_deriv(theta, n); }

// Transmit/receive steering vectors and derivatives at the target angle.
struct SteeringSet {
    Eigen::VectorXcd a;      // length M
    Eigen::VectorXcd b;      // length N_s
    Eigen::VectorXcd a_dot;
    Eigen::VectorXcd b_dot;

    double a_norm2() const { return static_cast<double>(a.size()); }
    double b_norm2() const { return static_cast<double>(b.size()); }
    double a_dot_norm2() const { return a_dot.squaredNorm(); }
    double b_dot_norm2() const { return b_dot.squaredNorm(); }
};

SteeringSet build_steering(const SystemParams& params);

// Rank-1 point-target response alpha * b(theta) a(theta)^T.
Eigen::MatrixXcd point_target_response(const SystemParams& params);

// Extended-target response as a sum of point-like scatterers.
Eigen::MatrixXcd extended_target_response(
    const std::vector<std::pair<cplx, double>>& scatterers, int m, int n_s);

// Communication channel with cached SVD factors. h_comm reconstructs from the
// factors to within 1e-10 relative Frobenius error; singular values are sorted
// non-increasing and rank_r counts those above max(N_c,M)*sigma_1*1e-12.
struct ChannelSet {
    Eigen::MatrixXcd h_comm;   // N_c x M
    Eigen::MatrixXcd svd_u;    // N_c x N_c
    Eigen::VectorXd svd_sigma; // min(N_c, M) singular values, non-increasing
    Eigen::MatrixXcd svd_v;    // M x M
    int rank_r = 0;
    std::optional<Eigen::MatrixXcd> h_sense_point;
    std::vector<std::pair<cplx, double>> scatterers;

    // Squared singular values of the first rank_r modes.
    Eigen::VectorXd gains2() const {
        return svd_sigma.head(rank_r).array().square().matrix();
    }
};

ChannelSet channel_from_matrix(const Eigen::MatrixXcd& h);

// Rician-fading draw: sqrt(K/(K+1)) * a_rx(theta_rx) a_tx(theta_tx)^T plus
// sqrt(1/(K+1)) * H_w with i.i.d. unit-variance CSCG entries. The scattered
// part is generated row-major from mt19937_64(seed) via Box-Muller, each
// entry (x + jy)/sqrt(2); this mapping is part of the output contract and
// must stay stable so stored fixtures remain valid.
ChannelSet rician_channel(const SystemParams& params, double theta_rx, double theta_tx);

}  // namespace crr

#endif
