// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crr/benchmarks.hpp"
#include "crr/boundary.hpp"
#include "crr/metrics.hpp"
#include "test_helpers.hpp"

using namespace crr;

namespace {

ChannelSet paper_like_channel(SystemParams& p, std::uint64_t seed) {
    p = test::small_params(seed);
    p.m_tx = 4;
    p.n_rx_comm = 3;
    p.n_rx_sense = 6;
    p.power = 12.0;
    return rician_channel(p, p.los_aoa, p.los_aod);
}

}  // namespace

TEST_CASE("time switching endpoints are the corners") {
    SystemParams p;
    const ChannelSet ch = paper_like_channel(p, 7);
    CornerPoint wf = rate_max_waterfill(ch, p);
    wf.crb = crb_at_rate_max(ch, p, CrbMetric::PointAngle);
    const CornerPoint sc = crb_min_point(ch, p);

    const auto at1 = time_switching(wf, sc, 1.0, CrbMetric::PointAngle, p, ch);
    REQUIRE(at1.has_value());
    CHECK(at1->rate == wf.rate);
    CHECK(at1->crb == wf.crb);

    const auto at0 = time_switching(wf, sc, 0.0, CrbMetric::PointAngle, p, ch);
    REQUIRE(at0.has_value());
    CHECK(at0->rate == sc.rate);
    CHECK(at0->crb == sc.crb);
}

TEST_CASE("time switching rate is linear in the split") {
    SystemParams p;
    const ChannelSet ch = paper_like_channel(p, 8);
    CornerPoint wf = rate_max_waterfill(ch, p);
    wf.crb = crb_at_rate_max(ch, p, CrbMetric::PointAngle);
    const CornerPoint sc = crb_min_point(ch, p);
    for (const double f : {0.1, 0.25, 0.5, 0.9}) {
        const auto pt = time_switching(wf, sc, f, CrbMetric::PointAngle, p, ch);
        REQUIRE(pt.has_value());
        CHECK(pt->rate ==
              doctest::Approx(f * wf.rate + (1 - f) * sc.rate).epsilon(1e-14));
    }
}

TEST_CASE("time switching needs a full-rank capacity covariance") {
    SystemParams p;
    const ChannelSet ch = paper_like_channel(p, 9);  // N_c = 3 < M = 4
    CornerPoint wf = rate_max_waterfill(ch, p);
    const CornerPoint sc = crb_min_extended(ch, p, CrbMetric::Trace);
    CHECK(!time_switching(wf, sc, 0.5, CrbMetric::Trace, p, ch).has_value());
    CHECK(!benchmark_boundary(Scheme::TimeSwitch, ch, p, CrbMetric::Trace,
                              Eigen::VectorXd::LinSpaced(11, 0.0, 1.0))
               .has_value());
}

TEST_CASE("equal power split") {
    SystemParams p;
    const ChannelSet ch = paper_like_channel(p, 10);
    const int r = ch.rank_r;

    // beta = 1 starves the sensing modes
    CHECK(power_split_ep(ch, p, 1.0, CrbMetric::Trace).crb == kInf);

    // beta = r/M is the equal power point
    const BenchmarkCurvePoint eq =
        power_split_ep(ch, p, static_cast<double>(r) / p.m_tx, CrbMetric::Trace);
    const CornerPoint corner = crb_min_extended(ch, p, CrbMetric::Trace);
    CHECK(eq.crb == doctest::Approx(corner.crb).epsilon(1e-12));
    CHECK(eq.rate == doctest::Approx(corner.rate).epsilon(1e-12));
}

TEST_CASE("strongest eigenmode split") {
    SystemParams p;
    const ChannelSet ch = paper_like_channel(p, 11);
    const BenchmarkCurvePoint eq =
        power_split_sem(ch, p, 1.0 / p.m_tx, CrbMetric::MaxEig);
    const CornerPoint corner = crb_min_extended(ch, p, CrbMetric::MaxEig);
    CHECK(eq.crb == doctest::Approx(corner.crb).epsilon(1e-12));
    CHECK(eq.rate == doctest::Approx(corner.rate).epsilon(1e-12));

    CHECK(power_split_sem(ch, p, 1.0, CrbMetric::Trace).crb == kInf);
}

TEST_CASE("envelope is a non-decreasing frontier") {
    SystemParams p;
    const ChannelSet ch = paper_like_channel(p, 12);
    const auto env = benchmark_boundary(Scheme::SplitEP, ch, p, CrbMetric::Trace,
                                        Eigen::VectorXd::LinSpaced(101, 0.0, 1.0));
    REQUIRE(env.has_value());
    REQUIRE(env->size() > 2);
    for (size_t i = 1; i < env->size(); ++i) {
        CHECK((*env)[i].crb >= (*env)[i - 1].crb);
        CHECK((*env)[i].rate >= (*env)[i - 1].rate);
    }
}

TEST_CASE("grid endpoints reproduce both corners") {
    SystemParams p;
    const ChannelSet ch = paper_like_channel(p, 13);
    Eigen::VectorXd two(2);
    two << 0.0, 1.0;
    const auto env =
        benchmark_boundary(Scheme::TimeSwitch, ch, p, CrbMetric::PointAngle, two);
    REQUIRE(env.has_value());
    REQUIRE(env->size() == 2);
    const CornerPoint sc = crb_min_point(ch, p);
    CHECK((*env)[0].rate == sc.rate);
    CHECK((*env)[1].rate == rate_max_waterfill(ch, p).rate);
}

TEST_CASE("optimal boundary dominates the benchmarks") {
    SystemParams p;
    const ChannelSet ch = paper_like_channel(p, 14);
    for (const CrbMetric m : {CrbMetric::Trace, CrbMetric::MaxEig}) {
        const auto env = benchmark_boundary(Scheme::SplitSEM, ch, p, m,
                                            Eigen::VectorXd::LinSpaced(21, 0.0, 1.0));
        REQUIRE(env.has_value());
        for (size_t i = 0; i < env->size(); i += 4) {
            const auto& bp = (*env)[i];
            const SolveOutcome opt = solve_scenario(scenario_index(m), ch, p, bp.crb);
            if (opt.status != SolveStatus::Optimal) continue;
            CHECK(opt.rate >= bp.rate - 1e-6);
        }
    }
}

TEST_CASE("strongest eigenmode is near optimal at low power") {
    SystemParams p;
    (void)paper_like_channel(p, 15);
    p.power = 1.0;
    const ChannelSet ch = rician_channel(p, p.los_aoa, p.los_aod);
    const CrbMetric m = CrbMetric::Trace;
    const double crbmin = crb_min_extended(ch, p, m).crb;
    const double gamma = crbmin * 1.6;

    double best_sem = 0;
    for (int i = 0; i <= 400; ++i) {
        const BenchmarkCurvePoint pt = power_split_sem(ch, p, i / 400.0, m);
        if (pt.crb <= gamma && pt.rate > best_sem) best_sem = pt.rate;
    }
    const SolveOutcome opt = solve_trace(ch, p, gamma);
    REQUIRE(opt.status == SolveStatus::Optimal);
    CHECK(best_sem >= opt.rate * 0.98);
}
