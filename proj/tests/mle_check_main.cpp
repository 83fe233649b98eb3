// SPDX-License-Identifier: Apache-2.0
//
// Statistical validation of the angle-estimation bound: Monte-Carlo ML
// estimation at high SNR against the analytic value. Minutes of runtime, so
// it is a manual binary rather than a registered test:
//
//   ./tests/mle_check [trials]

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "crr/corner.hpp"
#include "crr/metrics.hpp"
#include "crr/oracle.hpp"

using namespace crr;

int main(int argc, char** argv) {
    const int trials = argc > 1 ? std::atoi(argv[1]) : 10000;

    SystemParams p;
    p.m_tx = 4;
    p.n_rx_comm = 2;
    p.n_rx_sense = 6;
    p.cpi_len = 64;
    p.power = 50.0;
    p.noise_sense = 1.0;
    p.reflect_coeff = cplx(1.0, 0.0);
    p.target_angle = 0.3;
    p.seed = 11;

    // high-SNR regime so the estimator is near-efficient
    const double snr = std::norm(p.reflect_coeff) * p.power * p.cpi_len / p.noise_sense;
    std::printf("sensing snr metric |a|^2 P L / sigma^2 = %.3g (need >= 1e3)\n", snr);
    if (snr < 1e3) {
        std::printf("FAIL precondition\n");
        return 1;
    }

    const ChannelSet ch = rician_channel(p, p.los_aoa, p.los_aod);
    const Eigen::MatrixXcd q = crb_min_point(ch, p).q;

    int failures = 0;

    {
        const MleCheckResult res = mle_variance_check(p, q, trials, 42);
        const double ratio = res.empirical_var / res.crb;
        const bool ok = ratio >= 0.8 && ratio <= 2.0;
        std::printf("[%s] variance ratio: empirical %.4e bound %.4e ratio %.3f (%d trials)\n",
                    ok ? "PASS" : "FAIL", res.empirical_var, res.crb, ratio, trials);
        failures += !ok;
    }

    {
        // doubling the power roughly halves the variance
        SystemParams p2 = p;
        p2.power = 2.0 * p.power;
        const int t2 = std::max(trials / 2, 2000);
        const MleCheckResult a = mle_variance_check(p, q, t2, 43);
        const MleCheckResult b = mle_variance_check(p2, (2.0 * q).eval(), t2, 44);
        const double shrink = b.empirical_var / a.empirical_var;
        const bool ok = shrink > 0.4 && shrink < 0.6 * 1.2;
        std::printf("[%s] power doubling: variance shrink %.3f (expect ~0.5)\n",
                    ok ? "PASS" : "FAIL", shrink);
        failures += !ok;
    }

    {
        // vanishing noise limit
        SystemParams p3 = p;
        p3.noise_sense = 1e-6;
        const MleCheckResult res = mle_variance_check(p3, q, 500, 45);
        const bool ok = res.empirical_var < 1e-9;
        std::printf("[%s] vanishing noise: empirical variance %.3e\n", ok ? "PASS" : "FAIL",
                    res.empirical_var);
        failures += !ok;
    }

    std::printf(failures ? "FAIL\n" : "PASS\n");
    return failures ? 1 : 0;
}
