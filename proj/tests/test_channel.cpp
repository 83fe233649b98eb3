// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crr/channel.hpp"
#include "crr/rng.hpp"
#include "test_helpers.hpp"

using namespace crr;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("steering vector values") {
    const Eigen::VectorXcd a0 = steering_tx(0.0, 4);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a0(i) - cplx(1, 0)) < 1e-15);

    const Eigen::VectorXcd a = steering_tx(kPi / 2, 2);
    CHECK(std::abs(a(0) - cplx(0, -1)) < 1e-12);
    CHECK(std::abs(a(1) - cplx(0, 1)) < 1e-12);
}

TEST_CASE("steering derivative values") {
    const Eigen::VectorXcd d = steering_tx_deriv(0.0, 2);
    CHECK(std::abs(d(0) - cplx(0, -kPi / 2)) < 1e-12);
    CHECK(std::abs(d(1) - cplx(0, kPi / 2)) < 1e-12);

    CHECK(steering_tx_deriv(kPi / 2, 5).norm() < 1e-12);
    CHECK(std::abs(steering_tx_deriv(0.7, 1)(0)) < 1e-15);

    CHECK(steering_rx_deriv(0.0, 2).squaredNorm() == doctest::Approx(kPi * kPi / 2).epsilon(1e-14));
}

TEST_CASE("steering orthogonality and unit modulus over random angles") {
    NormalStream rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const double theta = (rng.next_uniform() - 0.5) * kPi;
        for (const int n : {2, 3, 5, 8, 12}) {
            const Eigen::VectorXcd v = steering(theta, n);
            const Eigen::VectorXcd dv = steering_deriv(theta, n);
            CHECK(std::abs((v.adjoint() * dv)(0, 0)) < 1e-12);
            for (int i = 0; i < n; ++i) CHECK(std::abs(std::abs(v(i)) - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("point target response") {
    SystemParams p = test::small_params();

    p.reflect_coeff = cplx(0, 0);
    CHECK(point_target_response(p).norm() == 0.0);

    p.reflect_coeff = cplx(1, 0);
    p.target_angle = 0;
    p.m_tx = 2;
    p.n_rx_sense = 2;
    const Eigen::MatrixXcd h = point_target_response(p);
    CHECK((h - Eigen::MatrixXcd::Ones(2, 2)).norm() < 1e-14);

    p.target_angle = 0.4;
    p.n_rx_sense = 3;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(point_target_response(p));
    CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));
}

TEST_CASE("extended target response") {
    const std::vector<std::pair<cplx, double>> single = {{cplx(0.8, -0.1), 0.3}};
    SystemParams p = test::small_params();
    p.reflect_coeff = single[0].first;
    p.target_angle = single[0].second;
    p.m_tx = 3;
    p.n_rx_sense = 4;
    CHECK((extended_target_response(single, 3, 4) - point_target_response(p)).norm() < 1e-14);

    const std::vector<std::pair<cplx, double>> nil = {{cplx(0, 0), 0.2}, {cplx(0, 0), -0.4}};
    CHECK(extended_target_response(nil, 3, 4).norm() == 0.0);

    const std::vector<std::pair<cplx, double>> two = {{cplx(1, 0), 0.2}, {cplx(0, 1), -0.5}};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(extended_target_response(two, 4, 4));
    CHECK(svd.singularValues()(2) < 1e-10 * svd.singularValues()(0));

    CHECK_THROWS(extended_target_response({}, 3, 4));
}

TEST_CASE("channel_from_matrix reconstructs and ranks") {
    NormalStream rng(3);
    Eigen::MatrixXcd h(4, 6);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) h(i, j) = rng.next_cscg();
    const ChannelSet ch = channel_from_matrix(h);

    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(4, 6);
    for (int i = 0; i < ch.svd_sigma.size(); ++i) sigma(i, i) = ch.svd_sigma(i);
    CHECK((ch.svd_u * sigma * ch.svd_v.adjoint() - h).norm() < 1e-10 * h.norm());
    CHECK(ch.rank_r == 4);
    for (int i = 1; i < ch.svd_sigma.size(); ++i)
        CHECK(ch.svd_sigma(i) <= ch.svd_sigma(i - 1));

    const ChannelSet low = test::channel_with_singulars(Eigen::Vector2d(2.0, 0.0), 3, 3);
    CHECK(low.rank_r == 1);
}

TEST_CASE("rician channel limits and determinism") {
    SystemParams p = test::small_params(42);
    p.m_tx = 4;
    p.n_rx_comm = 4;

    p.rician_k = 1e12;
    const ChannelSet los = rician_channel(p, p.los_aoa, p.los_aod);
    const Eigen::MatrixXcd expect =
        steering(p.los_aoa, 4) * steering(p.los_aod, 4).transpose();
    CHECK((los.h_comm - expect).norm() < 1e-5 * expect.norm());

    p.rician_k = 0.0;
    double sum_sq = 0;
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
        p.seed = 1000 + d;
        sum_sq += rician_channel(p, p.los_aoa, p.los_aod).h_comm.squaredNorm();
    }
    const double per_entry_var = sum_sq / (draws * 16.0);
    CHECK(per_entry_var == doctest::Approx(1.0).epsilon(0.05));

    p.seed = 77;
    const ChannelSet c1 = rician_channel(p, p.los_aoa, p.los_aod);
    const ChannelSet c2 = rician_channel(p, p.los_aoa, p.los_aod);
    CHECK((c1.h_comm - c2.h_comm).norm() == 0.0);
}
