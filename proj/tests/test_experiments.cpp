#include <doctest.h>

#include <cmath>

#include "parimutuel/error.hpp"
#include "parimutuel/experiments.hpp"

using namespace parimutuel;

namespace {

const auto kGrowth = make_schedule(ScheduleKind::ExpGrowth, 0.35);

BiasSummary fake_summary(double a, double b, double ratio1, const std::string& schedule = "0.35-growth") {
    BiasSummary s;
    s.a = a;
    s.b = b;
    s.schedule = schedule;
    s.p = Eigen::VectorXd::Constant(2, 0.5);
    s.mean_v = Eigen::VectorXd::Constant(2, 0.5);
    s.mean_v[0] = 0.5 * ratio1;
    s.stderr_v = Eigen::VectorXd::Zero(2);
    return s;
}

}  // namespace

TEST_CASE("best_b") {
    CHECK(best_b({fake_summary(0.3, 4.0, 0.9)}).first == 4.0);
    const auto pick = best_b({fake_summary(0.3, 20.0, 0.95), fake_summary(0.3, 4.0, 0.97), fake_summary(0.3, 1.0, 0.9)});
    CHECK(pick.first == 4.0);
    CHECK(pick.second == doctest::Approx(0.97));
    CHECK(best_b({fake_summary(0.3, 20.0, 0.95), fake_summary(0.3, 2.0, 0.95)}).first == 2.0);
    CHECK_THROWS_AS(best_b({}), ValidationError);
    CHECK_THROWS_AS(best_b({fake_summary(0.3, 4.0, 0.9), fake_summary(1.3, 4.0, 0.9)}), ValidationError);
    CHECK_THROWS_AS(best_b({fake_summary(0.3, 4.0, 0.9), fake_summary(0.3, 2.0, 0.9, "0.01-growth")}), ValidationError);
}

TEST_CASE("run_point: uniform consensus is unbiased") {
    const PlanCell cell{0.0, 4.0, kGrowth, 0};
    const auto s = run_point(cell, RaceConfig{}, 500, 11);
    REQUIRE(s.size() == 14);
    CHECK(std::abs(s.mean_v.sum() - 1.0) < 1e-9);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        CAPTURE(i);
        CHECK(std::abs(s.ratio()[i] - 1.0) <= 3.5 * s.ratio_stderr(i));
    }
}

TEST_CASE("run_point does not depend on the worker count") {
    const PlanCell cell{0.3, 4.0, kGrowth, 3};
    RaceConfig config;
    config.total_units = 20000;
    const auto serial = run_point(cell, config, 64, 5, Parallelism{1});
    for (const Parallelism par : {Parallelism{4}, Parallelism::automatic()}) {
        const auto other = run_point(cell, config, 64, 5, par);
        CHECK(other.mean_v == serial.mean_v);
        CHECK(other.stderr_v == serial.stderr_v);
    }
}

TEST_CASE("sweep ordering, seeds and recomputability") {
    ExperimentPlan plan;
    CHECK(plan.cell_count() == 65);

    plan.a_values = {0.1, 0.5};
    plan.b_values = {1.0, 20.0};
    plan.schedules = {kGrowth, make_schedule(ScheduleKind::Linear, 0.01)};
    plan.replications = 8;
    plan.base_seed = 42;
    plan.config.total_units = 5000;
    const auto out = sweep(plan, Parallelism{2});
    REQUIRE(out.size() == 8);
    for (std::size_t k = 0; k < out.size(); ++k) {
        CHECK(out[k].cell_index == k);
        CHECK(out[k].a == plan.a_values[k / 4]);
        CHECK(out[k].b == plan.b_values[(k / 2) % 2]);
        CHECK(out[k].schedule == plan.schedules[k % 2].label());
    }

    // Any single cell can be recomputed from (base_seed, cell index) alone.
    const PlanCell cell{0.5, 1.0, make_schedule(ScheduleKind::Linear, 0.01), 5};
    const auto again = run_point(cell, plan.config, plan.replications, plan.base_seed);
    CHECK(again.mean_v == out[5].mean_v);

    plan.replications = 0;
    CHECK_THROWS_AS(sweep(plan), ConfigError);
    plan.replications = 8;
    plan.b_values = {-1.0};
    CHECK_THROWS_AS(sweep(plan), ConfigError);
}

TEST_CASE("favorite-longshot bias direction for moderate and strong consensus") {
    for (double a : {0.1, 0.3, 0.5, 1.3}) {
        for (double b : {1.0 / 400, 1.0, 4.0, 54.0, 400.0}) {
            CAPTURE(a);
            CAPTURE(b);
            const auto s = run_point(PlanCell{a, b, kGrowth, 0}, RaceConfig{}, 400, 8, Parallelism::automatic());
            const auto r = s.ratio();
            CHECK(r[0] < 1.0);
            CHECK(r[13] > 1.0);
        }
    }
}

TEST_CASE("weak consensus with a sharp preference overbets the favorite") {
    // With a = 0.05 the rank-1 horse changes almost every minute and a sharp
    // preference piles onto whichever horse currently looks best, lifting the
    // favorite above its consensus share.
    const auto s = run_point(PlanCell{0.05, 400.0, kGrowth, 0}, RaceConfig{}, 1000, 8, Parallelism::automatic());
    CHECK(s.ratio()[0] > 1.0 + 2 * s.ratio_stderr(0));
}
