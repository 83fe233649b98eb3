// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_TEST_HELPERS_HPP
#define CRR_TEST_HELPERS_HPP

#include <Eigen/Dense>

#include "crr/channel.hpp"
#include "crr/rng.hpp"
#include "crr/system.hpp"

namespace crr::test {

// Channel whose singular values are exactly the given list (diagonal H).
inline ChannelSet channel_with_singulars(const Eigen::VectorXd& sigma, int n_rx, int m_tx) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n_rx, m_tx);
    for (int i = 0; i < sigma.size() && i < std::min(n_rx, m_tx); ++i) h(i, i) = sigma(i);
    return channel_from_matrix(h);
}

inline Eigen::MatrixXcd random_psd(int n, NormalStream& rng, double ridge = 0.0) {
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.next_cscg();
    Eigen::MatrixXcd q = g * g.adjoint();
    if (ridge > 0) q += ridge * Eigen::MatrixXcd::Identity(n, n);
    return q;
}

inline SystemParams small_params(std::uint64_t seed = 7) {
    SystemParams p;
    p.m_tx = 2;
    p.n_rx_comm = 2;
    p.n_rx_sense = 3;
    p.cpi_len = 32;
    p.power = 5.0;
    p.noise_comm = 1.0;
    p.noise_sense = 1.0;
    p.reflect_coeff = cplx(1.0, 0.0);
    p.target_angle = 0.35;
    p.rician_k = 2.0;
    p.seed = seed;
    return p;
}

}  // namespace crr::test

#endif
