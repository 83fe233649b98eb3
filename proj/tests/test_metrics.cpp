// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "crr/metrics.hpp"
#include "test_helpers.hpp"

using namespace crr;

TEST_CASE("rate basics") {
    SystemParams p = test::small_params();
    const ChannelSet ch = test::channel_with_singulars(Eigen::Vector2d(std::sqrt(2.0), 1.0), 2, 2);

    CHECK(rate(Eigen::MatrixXcd::Zero(2, 2), ch, p) == doctest::Approx(0.0).epsilon(1e-14));

    // single-mode sanity: log2(1 + 1) = 1
    const ChannelSet scalar = channel_from_matrix(Eigen::MatrixXcd::Ones(1, 1));
    CHECK(rate(Eigen::MatrixXcd::Ones(1, 1), scalar, p) == doctest::Approx(1.0).epsilon(1e-14));

    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(2, 2);
    q(0, 0) = 1.75;
    q(1, 1) = 1.25;
    const double expect = std::log2(4.5) + std::log2(2.25);
    CHECK(rate(q, ch, p) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(rate_alloc(Eigen::Vector2d(1.75, 1.25), ch.gains2(), 1.0) ==
          doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("rate concavity spot check") {
    SystemParams p = test::small_params();
    p.m_tx = 3;
    p.n_rx_comm = 3;
    const ChannelSet ch = rician_channel(p, p.los_aoa, p.los_aod);
    NormalStream rng(5);
    for (int t = 0; t < 50; ++t) {
        const Eigen::MatrixXcd q1 = test::random_psd(3, rng);
        const Eigen::MatrixXcd q2 = test::random_psd(3, rng);
        const double mid = rate(0.5 * (q1 + q2), ch, p);
        const double avg = 0.5 * (rate(q1, ch, p) + rate(q2, ch, p));
        CHECK(mid >= avg - 1e-9);
    }
}

TEST_CASE("point angle bound, rank-1 closed form") {
    SystemParams p = test::small_params();
    p.m_tx = 4;
    p.n_rx_sense = 6;
    p.power = 3.7;
    p.reflect_coeff = cplx(0.3, 0.4);
    const SteeringSet s = build_steering(p);

    const Eigen::MatrixXcd q =
        (p.power / s.a_norm2()) * (s.a.conjugate() * s.a.transpose());
    const double expect = p.noise_sense /
                          (2.0 * std::norm(p.reflect_coeff) * p.cpi_len *
                           s.b_dot_norm2() * s.a_norm2() * p.power);
    CHECK(crb_point_angle(q, s, p) == doctest::Approx(expect).epsilon(1e-10));

    CHECK(crb_point_angle((2.0 * q).eval(), s, p) ==
          doctest::Approx(crb_point_angle(q, s, p) / 2).epsilon(1e-12));
}

TEST_CASE("point angle bound degenerates to +inf") {
    SystemParams p = test::small_params();
    p.m_tx = 3;
    p.n_rx_sense = 1;  // receive derivative vanishes
    const SteeringSet s = build_steering(p);
    const Eigen::MatrixXcd q =
        (p.power / s.a_norm2()) * (s.a.conjugate() * s.a.transpose());
    CHECK(crb_point_angle(q, s, p) == kInf);
}

TEST_CASE("extended bounds at equal power match closed forms") {
    SystemParams p = test::small_params();
    p.m_tx = 8;
    p.n_rx_sense = 12;
    p.power = 800;
    p.cpi_len = 128;
    const Eigen::MatrixXcd q =
        (p.power / p.m_tx) * Eigen::MatrixXcd::Identity(p.m_tx, p.m_tx);

    const double l = p.cpi_len, ns = p.n_rx_sense, m = p.m_tx, pw = p.power;
    CHECK(crb_extended(q, p, CrbMetric::Trace) ==
          doctest::Approx(ns * m * m / (pw * l)).epsilon(1e-12));
    CHECK(crb_extended(q, p, CrbMetric::MaxEig) ==
          doctest::Approx(m / (l * pw)).epsilon(1e-12));
    CHECK(crb_extended(q, p, CrbMetric::LogDet) ==
          doctest::Approx(m * ns * std::log(m / (l * pw))).epsilon(1e-12));
}

TEST_CASE("extended bound is +inf for singular covariance") {
    SystemParams p = test::small_params();
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(2, 2);
    q(0, 0) = 1.0;
    CHECK(crb_extended(q, p, CrbMetric::Trace) == kInf);
    CHECK(crb_extended(q, p, CrbMetric::MaxEig) == kInf);
    CHECK(crb_extended(q, p, CrbMetric::LogDet) == kInf);
}

TEST_CASE("homogeneity in the covariance scale") {
    SystemParams p = test::small_params();
    p.m_tx = 3;
    p.n_rx_sense = 4;
    const SteeringSet s = build_steering(p);
    NormalStream rng(17);
    for (int t = 0; t < 100; ++t) {
        const Eigen::MatrixXcd q = test::random_psd(3, rng, 1e-3);
        const double c = 0.1 + 5.0 * rng.next_uniform();

        CHECK(crb_extended((c * q).eval(), p, CrbMetric::Trace) ==
              doctest::Approx(crb_extended(q, p, CrbMetric::Trace) / c).epsilon(1e-9));
        CHECK(crb_extended((c * q).eval(), p, CrbMetric::MaxEig) ==
              doctest::Approx(crb_extended(q, p, CrbMetric::MaxEig) / c).epsilon(1e-9));
        CHECK(crb_point_angle((c * q).eval(), s, p) ==
              doctest::Approx(crb_point_angle(q, s, p) / c).epsilon(1e-9));

        const double shift = p.m_tx * p.n_rx_sense * std::log(c);
        CHECK(crb_extended((c * q).eval(), p, CrbMetric::LogDet) ==
              doctest::Approx(crb_extended(q, p, CrbMetric::LogDet) - shift).epsilon(1e-9));
    }
}

TEST_CASE("trace of inverse is convex on random pairs") {
    SystemParams p = test::small_params();
    NormalStream rng(23);
    for (int t = 0; t < 50; ++t) {
        const Eigen::MatrixXcd q1 = test::random_psd(3, rng, 1e-2);
        const Eigen::MatrixXcd q2 = test::random_psd(3, rng, 1e-2);
        p.m_tx = 3;
        const double mid = crb_extended(0.5 * (q1 + q2), p, CrbMetric::Trace);
        const double avg = 0.5 * (crb_extended(q1, p, CrbMetric::Trace) +
                                  crb_extended(q2, p, CrbMetric::Trace));
        CHECK(mid <= avg + 1e-9);
    }
}

TEST_CASE("kronecker structure of the information matrix") {
    SystemParams p = test::small_params();
    p.m_tx = 3;
    p.n_rx_sense = 4;
    NormalStream rng(29);
    for (int t = 0; t < 10; ++t) {
        const Eigen::MatrixXcd q = test::random_psd(3, rng, 1e-3);
        const double scale = p.cpi_len / p.noise_sense;
        const Eigen::MatrixXcd big = Eigen::kroneckerProduct(
            (scale * q.transpose()).eval(), Eigen::MatrixXcd::Identity(4, 4));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> big_es(hermitianize(big),
                                                               Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> small_es(hermitianize(q),
                                                                 Eigen::EigenvaluesOnly);
        CHECK(big_es.eigenvalues().minCoeff() ==
              doctest::Approx(scale * small_es.eigenvalues().minCoeff()).epsilon(1e-10));
    }
}

TEST_CASE("constraint block matches the scalar bound") {
    // PSD of the 2x2 block iff the angle bound meets the threshold.
    SystemParams p = test::small_params();
    p.m_tx = 3;
    p.n_rx_sense = 4;
    const SteeringSet s = build_steering(p);
    NormalStream rng(31);
    for (int t = 0; t < 40; ++t) {
        const Eigen::MatrixXcd q = test::random_psd(3, rng, 1e-3);
        const double crb = crb_point_angle(q, s, p);
        for (const double fact : {0.5, 0.999999, 1.000001, 2.0}) {
            const double gamma = crb * fact;
            const Eigen::Matrix2cd blk =
                point_crb_constraint_matrix(q, s, gamma_tilde_point(gamma, p));
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(blk, Eigen::EigenvaluesOnly);
            const bool psd = es.eigenvalues().minCoeff() >= -1e-9 * blk.norm();
            CHECK(psd == (fact >= 1.0));
        }
    }
}
