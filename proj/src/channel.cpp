// SPDX-License-Identifier: Apache-2.0

#include "crr/channel.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "crr/rng.hpp"

namespace crr {

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

Eigen::VectorXcd steering(double theta, int n) {
    if (n < 1) throw std::invalid_argument("steering: n must be >= 1");
    Eigen::VectorXcd v(n);
    const double s = std::sin(theta);
    for (int i = 0; i < n; ++i) {
        const double phase = 0.5 * (2 * (i + 1) - 1 - n) * kPi * s;
        v(i) = cplx(std::cos(phase), std::sin(phase));
    }
    return v;
}

Eigen::VectorXcd steering_deriv(double theta, int n) {
    Eigen::VectorXcd v = steering(theta, n);
    const double c = std::cos(theta);
    for (int i = 0; i < n; ++i) {
        v(i) *= cplx(0.0, 0.5 * (2 * (i + 1) - 1 - n) * kPi * c);
    }
    return v;
}

SteeringSet build_steering(const SystemParams& params) {
    SteeringSet s;
    s.a = steering(params.target_angle, params.m_tx);
    s.b = steering(params.target_angle, params.n_rx_sense);
    s.a_dot = steering_deriv(params.target_angle, params.m_tx);
    s.b_dot = steering_deriv(params.target_angle, params.n_rx_sense);
    return s;
}

Eigen::MatrixXcd point_target_response(const SystemParams& params) {
    const Eigen::VectorXcd a = steering(params.target_angle, params.m_tx);
    const Eigen::VectorXcd b = steering(params.target_angle, params.n_rx_sense);
    return params.reflect_coeff * (b * a.transpose());
}

Eigen::MatrixXcd extended_target_response(
    const std::vector<std::pair<cplx, double>>& scatterers, int m, int n_s) {
    if (scatterers.empty())
        throw std::invalid_argument("extended_target_response: empty scatterer list");
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n_s, m);
    for (const auto& [alpha_k, theta_k] : scatterers) {
        h += alpha_k * (steering(theta_k, n_s) * steering(theta_k, m).transpose());
    }
    return h;
}

ChannelSet channel_from_matrix(const Eigen::MatrixXcd& h) {
    ChannelSet ch;
    ch.h_comm = h;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    ch.svd_u = svd.matrixU();
    ch.svd_v = svd.matrixV();
    ch.svd_sigma = svd.singularValues();
    const double tol = std::max(h.rows(), h.cols()) * ch.svd_sigma.maxCoeff() * 1e-12;
    ch.rank_r = 0;
    for (int i = 0; i < ch.svd_sigma.size(); ++i) {
        if (ch.svd_sigma(i) > tol) ++ch.rank_r;
    }
    return ch;
}

ChannelSet rician_channel(const SystemParams& params, double theta_rx, double theta_tx) {
    const int nc = params.n_rx_comm;
    const int m = params.m_tx;
    const Eigen::MatrixXcd h_los =
        steering(theta_rx, nc) * steering(theta_tx, m).transpose();

    NormalStream rng(params.seed);
    Eigen::MatrixXcd h_w(nc, m);
    for (int i = 0; i < nc; ++i) {
        for (int j = 0; j < m; ++j) {
            h_w(i, j) = rng.next_cscg();
        }
    }

    const double k = params.rician_k;
    const Eigen::MatrixXcd h =
        std::sqrt(k / (k + 1.0)) * h_los + std::sqrt(1.0 / (k + 1.0)) * h_w;
    return channel_from_matrix(h);
}

}  // namespace crr
