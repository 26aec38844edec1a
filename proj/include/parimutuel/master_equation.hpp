#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "parimutuel/distributions.hpp"
#include "parimutuel/parallel.hpp"

namespace parimutuel {

// Density evolution of the favorite's pool share V_1(t) in a two-horse race.
//
// Within a minute the favorite's unit count gains Binomial(m f(t), c) where
// c = q if V_1(t-1) < p and c = 1 - q otherwise. Dividing by m F(t) and
// replacing the binomial by its normal limit gives the transition kernel
//
//     V_1(t) | V_1(t-1) = s  ~  N(s + (c - s) f/F, q (1 - q) f / (m F^2)).
//
// The density is carried on a uniform grid over [0, 1] and propagated by
// direct quadrature of the transition integral.

inline constexpr int kDefaultGridSize = 4000;

struct DensityGrid {
    Eigen::VectorXd points;  // k_j = j / G, j = 0..G
    Eigen::VectorXd mass;    // P(k_j, t)
    int minute = kFirstMinute;

    int grid_size() const noexcept { return static_cast<int>(points.size()) - 1; }
    double spacing() const noexcept { return 1.0 / grid_size(); }
    double integral() const;  // trapezoidal
};

DensityGrid uniform_density(int grid_size, int minute = kFirstMinute);

struct KernelParams {
    double mean = 0.0;      // drift of V_1 over the minute
    double variance = 0.0;  // q (1 - q) f / (m F^2)
    double split_point = 0.0;
};

/// Kernel for a source at s during `minute`.
KernelParams kernel_params(double s, int minute, const AccumulationSchedule& schedule, double q, double p,
                           std::int64_t m);

/// Normal density, exactly the textbook formula. Throws for variance <= 0.
double gaussian_pdf(double x, double mean, double variance);

/// Normal approximation of the pre-bet share at t = -20: mean p,
/// variance p (1 - p) / round(m F(-20)), truncated to [0, 1] and renormalized.
DensityGrid init_density(double p, std::int64_t m, const AccumulationSchedule& schedule,
                         int grid_size = kDefaultGridSize);

struct EvolveStep {
    DensityGrid density;
    double leakage = 0.0;  // 1 - mass before renormalization
};

/// Advances `density` (at minute - 1) to `minute`. A minute with f(t) = 0
/// returns the input mass unchanged.
EvolveStep evolve_density_step(const DensityGrid& density, int minute, const AccumulationSchedule& schedule,
                               double q, double p, std::int64_t m);

DensityGrid evolve_density(const DensityGrid& density, int minute, const AccumulationSchedule& schedule, double q,
                           double p, std::int64_t m);

struct DensityMoments {
    double mean = 0.0;
    double variance = 0.0;
};

DensityMoments density_stats(const DensityGrid& density);

/// Cumulative distribution at x, piecewise linear between grid nodes.
double density_cdf(const DensityGrid& density, double x);

struct DensityEvolution {
    std::vector<DensityGrid> snapshots;  // t = -20..0
    std::vector<double> leakage;         // per step, t = -19..0
};

DensityEvolution solve_master_equation(double p, double q, std::int64_t m, const AccumulationSchedule& schedule,
                                       int grid_size = kDefaultGridSize);

struct DivergenceReport {
    double p = 0.0;
    double q = 0.0;
    std::int64_t m = 0;
    std::string schedule;
    int grid_size = 0;
    int replications = 0;
    std::uint64_t base_seed = 0;

    double mc_mean = 0.0;
    double mc_std = 0.0;
    double mc_stderr = 0.0;
    double pde_mean = 0.0;
    double pde_std = 0.0;

    double abs_delta_mean = 0.0;
    double rel_delta_std = 0.0;  // |std_pde - std_mc| / std_mc
    double cdf_sup_distance = 0.0;
    double max_leakage = 0.0;
    std::vector<double> leakage;
};

/// Runs the race engine at N = 2 with consensus (p, 1 - p) and preference
/// (q, 1 - q), evolves the density to t = 0 and compares the two.
DivergenceReport compare_with_mc(double p, double q, std::int64_t m, const AccumulationSchedule& schedule,
                                 int grid_size, int replications, std::uint64_t base_seed,
                                 Parallelism parallelism = {});

/// Same, returning the solved density as well.
DivergenceReport compare_with_mc(double p, double q, std::int64_t m, const AccumulationSchedule& schedule,
                                 int grid_size, int replications, std::uint64_t base_seed, Parallelism parallelism,
                                 DensityEvolution& evolution);

}  // namespace parimutuel
