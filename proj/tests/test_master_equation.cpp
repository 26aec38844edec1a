#include <doctest.h>

#include <cmath>
#include <numbers>

#include "parimutuel/error.hpp"
#include "parimutuel/master_equation.hpp"

using namespace parimutuel;

namespace {

const auto kGrowth = make_schedule(ScheduleKind::ExpGrowth, 0.35);

// Single occupied node at `s0`, sitting at `minute`.
DensityGrid point_mass(double s0, int minute, int grid_size = kDefaultGridSize) {
    DensityGrid d = uniform_density(grid_size, minute);
    d.mass.setZero();
    const int j = static_cast<int>(std::lround(s0 * grid_size));
    d.mass[j] = 1.0;
    d.mass /= d.integral();
    return d;
}

}  // namespace

TEST_CASE("gaussian_pdf") {
    CHECK(gaussian_pdf(0.0, 0.0, 1.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(gaussian_pdf(0.3, 0.3, 0.04) == doctest::Approx(1.0 / (std::sqrt(2 * std::numbers::pi) * 0.2)));
    for (double d : {0.01, 0.5, 3.0}) CHECK(gaussian_pdf(1.0 + d, 1.0, 0.7) == gaussian_pdf(1.0 - d, 1.0, 0.7));
    CHECK_THROWS_AS(gaussian_pdf(0.0, 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(gaussian_pdf(0.0, 0.0, -1.0), ValidationError);
}

TEST_CASE("kernel_params follows the binomial accumulation identity") {
    const double f = kGrowth.increment(-5), F = kGrowth.cumulative(-5);
    const auto below = kernel_params(0.55, -5, kGrowth, 2.0 / 3, 0.6, 200000);
    CHECK(below.mean == doctest::Approx((2.0 / 3 - 0.55) * f / F));
    CHECK(below.variance == doctest::Approx((2.0 / 3) * (1.0 / 3) * f / (200000 * F * F)));
    const auto at_split = kernel_params(0.6, -5, kGrowth, 2.0 / 3, 0.6, 200000);
    CHECK(at_split.mean == doctest::Approx((1.0 / 3 - 0.6) * f / F));
}

TEST_CASE("init_density") {
    const auto d = init_density(0.6, 200000, kGrowth);
    CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-12));
    const auto stats = density_stats(d);
    CHECK(std::abs(stats.mean - 0.6) < 1e-6);
    CHECK(std::abs(std::sqrt(stats.variance) - 0.001851640199545103) < 1e-6);
    CHECK((d.mass.array() >= 0).all());

    const auto sym = init_density(0.5, 200000, kGrowth);
    const int g = sym.grid_size();
    for (int j = 0; j <= g; ++j) REQUIRE(sym.mass[j] == doctest::Approx(sym.mass[g - j]).epsilon(1e-12));

    CHECK_THROWS_AS(init_density(0.6, 2000, make_schedule(ScheduleKind::ExpGrowth, 0.01)), ValidationError);
    CHECK_THROWS_AS(init_density(1.0, 200000, kGrowth), ValidationError);
}

TEST_CASE("density_stats of a uniform density") {
    const auto u = uniform_density(4000);
    const auto s = density_stats(u);
    CHECK(s.mean == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(s.variance - 1.0 / 12) < 1e-6);
    CHECK(density_cdf(u, 0.25) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("evolve_density: zero increment returns the input") {
    std::map<int, double> series;
    for (int t = -20; t <= 0; ++t) series[t] = t < -5 ? 0.35 + 0.01 * (t + 20) : 0.5 + 0.1 * (t + 5);
    series[-6] = 0.49;
    series[-5] = 0.49;  // f(-5) = 0
    const auto schedule = make_tabulated_schedule(series);
    REQUIRE(schedule.increment(-5) == 0.0);
    DensityGrid d = init_density(0.6, 200000, schedule);
    d.minute = -6;
    const auto step = evolve_density_step(d, -5, schedule, 2.0 / 3, 0.6, 200000);
    CHECK(step.density.mass == d.mass);
    CHECK(step.density.minute == -5);
    CHECK(step.leakage == 0.0);
}

TEST_CASE("evolve_density: a point mass moves by the binomial drift") {
    // Oracle: V(t) = (m F(t-1) s0 + X) / (m F(t)), X ~ Binomial(m f(t), q), so
    // E[V] = s0 + (q - s0) f/F and Var[V] = q (1-q) f / (m F^2).
    const double q = 2.0 / 3, p = 0.6, s0 = 0.55;
    const int minute = -12;
    const double f = kGrowth.increment(minute), F = kGrowth.cumulative(minute);
    const double expected_mean = s0 + (q - s0) * f / F;
    const double expected_var = q * (1 - q) * f / (200000 * F * F);

    const auto out = evolve_density(point_mass(s0, minute - 1), minute, kGrowth, q, p, 200000);
    const auto stats = density_stats(out);
    CHECK(std::abs(stats.mean - expected_mean) < 1e-9);
    CHECK(stats.variance == doctest::Approx(expected_var).epsilon(1e-6));
}

TEST_CASE("evolve_density: drift fixed point at s = q when q < p") {
    const double q = 0.6, p = 0.8;
    const auto out = evolve_density(point_mass(q, -1), 0, kGrowth, q, p, 200000);
    CHECK(std::abs(density_stats(out).mean - q) < 1e-12);
}

TEST_CASE("evolve_density: errors") {
    const auto d = init_density(0.6, 200000, kGrowth);
    CHECK_THROWS_AS(evolve_density(d, -18, kGrowth, 2.0 / 3, 0.6, 200000), ValidationError);
    CHECK_THROWS_AS(evolve_density(d, -20, kGrowth, 2.0 / 3, 0.6, 200000), ValidationError);
    CHECK_THROWS_AS(evolve_density(d, -19, kGrowth, 1.2, 0.6, 200000), ValidationError);
    DensityGrid broken = d;
    broken.mass.conservativeResize(10);
    CHECK_THROWS_AS(evolve_density(broken, -19, kGrowth, 2.0 / 3, 0.6, 200000), ValidationError);
}

TEST_CASE("solve_master_equation: mass conservation and grid convergence") {
    const auto coarse = solve_master_equation(0.6, 2.0 / 3, 200000, kGrowth, 4000);
    REQUIRE(coarse.snapshots.size() == 21);
    REQUIRE(coarse.leakage.size() == 20);
    for (std::size_t i = 0; i < coarse.snapshots.size(); ++i) {
        CHECK(coarse.snapshots[i].minute == -20 + static_cast<int>(i));
        CHECK(coarse.snapshots[i].integral() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK((coarse.snapshots[i].mass.array() >= 0).all());
    }
    for (double l : coarse.leakage) CHECK(std::abs(l) < 1e-6);

    const auto fine = solve_master_equation(0.6, 2.0 / 3, 200000, kGrowth, 8000);
    CHECK(std::abs(density_stats(coarse.snapshots.back()).mean - density_stats(fine.snapshots.back()).mean) < 1e-6);
}

TEST_CASE("compare_with_mc: symmetric preference keeps the mean at one half") {
    const auto report = compare_with_mc(0.5, 0.5, 200000, kGrowth, 4000, 2000, 17);
    CHECK(std::abs(report.pde_mean - 0.5) < 1e-9);
    CHECK(report.abs_delta_mean < 3 * report.mc_stderr);
    CHECK_THROWS_AS(compare_with_mc(0.5, 0.5, 200000, kGrowth, 4000, 999, 17), ValidationError);
}

TEST_CASE("compare_with_mc: engine equivalence across settings") {
    struct Case {
        double p, q;
        const char* schedule;
    };
    for (const Case& c : {Case{0.6, 2.0 / 3, "0.35-growth"}, Case{0.75, 0.6, "0.35-growth"},
                          Case{0.6, 0.9, "0.01-growth"}}) {
        CAPTURE(c.p);
        CAPTURE(c.q);
        CAPTURE(c.schedule);
        const auto report = compare_with_mc(c.p, c.q, 200000, schedule_from_name(c.schedule), 4000, 10000, 2024);
        CHECK(report.abs_delta_mean < 3 * report.mc_stderr);
        CHECK(report.rel_delta_std < 0.1);
        CHECK(report.cdf_sup_distance < 0.05);
    }
}
