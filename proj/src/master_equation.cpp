#include "parimutuel/master_equation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "parimutuel/error.hpp"
#include "parimutuel/race.hpp"
#include "parimutuel/rng.hpp"

namespace parimutuel {

namespace {

// Kernel tails beyond this many standard deviations are dropped (< 1e-31).
constexpr double kKernelCutoff = 12.0;

void check_split_and_preference(double q, double p) {
    if (!(q >= 0.5 && q < 1.0)) throw ValidationError("master equation: q must lie in [0.5, 1)");
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("master equation: p must lie in (0, 1)");
}

double trapezoid_weight(int j, int grid_size) {
    const double h = 1.0 / grid_size;
    return (j == 0 || j == grid_size) ? 0.5 * h : h;
}

struct Source {
    double position;
    double weight;  // probability mass carried
    double target;  // rank-one preference of the branch (q or 1 - q)
};

// Splits the cell of node j at the branch point p. The cell density is
// taken linear with the centered-difference slope; falls back to flat if
// that would produce negative mass on either side.
void split_cell(const DensityGrid& density, int j, double lo, double hi, double p, double weight, double q,
                std::vector<Source>& sources) {
    const int g = density.grid_size();
    const double h = density.spacing();
    const double s_j = density.points[j];
    const double centre_value = density.mass[j];
    const double left_value = j > 0 ? density.mass[j - 1] : centre_value;
    const double right_value = j < g ? density.mass[j + 1] : centre_value;
    double slope = (right_value - left_value) / (2.0 * h);

    auto mass_on = [&](double a, double b) {
        const double da = a - s_j, db = b - s_j;
        return centre_value * (b - a) + 0.5 * slope * (db * db - da * da);
    };
    auto moment_on = [&](double a, double b) {  // about s_j
        const double da = a - s_j, db = b - s_j;
        return 0.5 * centre_value * (db * db - da * da) + slope / 3.0 * (db * db * db - da * da * da);
    };

    double left = mass_on(lo, p);
    double right = mass_on(p, hi);
    if (left < 0.0 || right < 0.0) {
        slope = 0.0;
        left = mass_on(lo, p);
        right = mass_on(p, hi);
    }
    const double total = left + right;
    if (total <= 0.0) return;
    const double scale = weight / total;
    if (left > 0.0) sources.push_back({s_j + moment_on(lo, p) / left, left * scale, q});
    if (right > 0.0) sources.push_back({s_j + moment_on(p, hi) / right, right * scale, 1.0 - q});
}

}  // namespace

double DensityGrid::integral() const {
    const int g = grid_size();
    double total = 0.0;
    for (int j = 0; j <= g; ++j) total += trapezoid_weight(j, g) * mass[j];
    return total;
}

DensityGrid uniform_density(int grid_size, int minute) {
    if (grid_size < 2) throw ValidationError("grid_size must be >= 2");
    DensityGrid out;
    out.points.resize(grid_size + 1);
    for (int j = 0; j <= grid_size; ++j) out.points[j] = static_cast<double>(j) / grid_size;
    out.mass = Eigen::VectorXd::Ones(grid_size + 1);
    out.minute = minute;
    return out;
}

double gaussian_pdf(double x, double mean, double variance) {
    if (!(variance > 0.0)) throw ValidationError("gaussian_pdf: variance must be positive");
    const double sigma = std::sqrt(variance);
    const double z = (x - mean) / sigma;
    return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

KernelParams kernel_params(double s, int minute, const AccumulationSchedule& schedule, double q, double p,
                           std::int64_t m) {
    check_split_and_preference(q, p);
    if (m < 1) throw ValidationError("master equation: m must be >= 1");
    const double f = schedule.increment(minute);
    const double cumulative = schedule.cumulative(minute);
    const double target = s < p ? q : 1.0 - q;
    KernelParams out;
    out.mean = (target - s) * f / cumulative;
    out.variance = q * (1.0 - q) * f / (static_cast<double>(m) * cumulative * cumulative);
    out.split_point = p;
    return out;
}

DensityGrid init_density(double p, std::int64_t m, const AccumulationSchedule& schedule, int grid_size) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("init_density: p must lie in (0, 1)");
    const std::int64_t prebets = prebet_count(schedule, m);
    if (prebets < 30) {
        throw ValidationError("init_density: " + std::to_string(prebets) +
                              " pre-bets is too few for the normal approximation (need >= 30)");
    }
    const double variance = p * (1.0 - p) / static_cast<double>(prebets);
    DensityGrid out = uniform_density(grid_size, kFirstMinute);
    for (int j = 0; j <= grid_size; ++j) out.mass[j] = gaussian_pdf(out.points[j], p, variance);
    out.mass /= out.integral();
    return out;
}

EvolveStep evolve_density_step(const DensityGrid& density, int minute, const AccumulationSchedule& schedule,
                               double q, double p, std::int64_t m) {
    check_split_and_preference(q, p);
    if (m < 1) throw ValidationError("master equation: m must be >= 1");
    if (minute <= kFirstMinute || minute > kLastMinute) {
        throw ValidationError("evolve_density: minute must lie in [-19, 0]");
    }
    if (density.points.size() != density.mass.size() || density.points.size() < 3) {
        throw ValidationError("evolve_density: grid points and mass differ in size");
    }
    if (density.minute != minute - 1) {
        throw ValidationError("evolve_density: density is at minute " + std::to_string(density.minute) +
                              ", expected " + std::to_string(minute - 1));
    }

    const double f = schedule.increment(minute);
    EvolveStep out{density, 0.0};
    out.density.minute = minute;
    if (f == 0.0) return out;

    const int g = density.grid_size();
    const double h = density.spacing();
    const double gain = f / schedule.cumulative(minute);
    const double retention = 1.0 - gain;
    const double variance = q * (1.0 - q) * f / (static_cast<double>(m) * std::pow(schedule.cumulative(minute), 2));
    const double sigma = std::sqrt(variance);

    // Each node carries its trapezoidal mass to s + (c - s) f/F; the node
    // whose cell contains p is divided between the two branches.
    std::vector<Source> sources;
    sources.reserve(static_cast<std::size_t>(g) + 2);
    for (int j = 0; j <= g; ++j) {
        if (density.mass[j] == 0.0) continue;
        const double weight = trapezoid_weight(j, g) * density.mass[j];
        const double lo = std::max(0.0, density.points[j] - 0.5 * h);
        const double hi = std::min(1.0, density.points[j] + 0.5 * h);
        if (hi <= p) {
            sources.push_back({density.points[j], weight, q});
        } else if (lo >= p) {
            sources.push_back({density.points[j], weight, 1.0 - q});
        } else {
            split_cell(density, j, lo, hi, p, weight, q, sources);
        }
    }

    Eigen::VectorXd next = Eigen::VectorXd::Zero(g + 1);
    const double reach = kKernelCutoff * sigma;
    for (const auto& src : sources) {
        const double centre = retention * src.position + gain * src.target;
        const int first = std::max(0, static_cast<int>(std::ceil((centre - reach) / h)));
        const int last = std::min(g, static_cast<int>(std::floor((centre + reach) / h)));
        for (int k = first; k <= last; ++k) next[k] += src.weight * gaussian_pdf(density.points[k], centre, variance);
    }

    out.density.mass = next;
    const double kept = out.density.integral();
    if (!(kept > 0.0)) throw std::runtime_error("evolve_density: all mass left the grid");
    out.leakage = 1.0 - kept;
    out.density.mass /= kept;
    return out;
}

DensityGrid evolve_density(const DensityGrid& density, int minute, const AccumulationSchedule& schedule, double q,
                           double p, std::int64_t m) {
    return evolve_density_step(density, minute, schedule, q, p, m).density;
}

DensityMoments density_stats(const DensityGrid& density) {
    const int g = density.grid_size();
    double total = 0.0, first = 0.0;
    for (int j = 0; j <= g; ++j) {
        const double w = trapezoid_weight(j, g) * density.mass[j];
        total += w;
        first += w * density.points[j];
    }
    const double mean = first / total;
    double second = 0.0;
    for (int j = 0; j <= g; ++j) {
        const double d = density.points[j] - mean;
        second += trapezoid_weight(j, g) * density.mass[j] * d * d;
    }
    return {mean, second / total};
}

double density_cdf(const DensityGrid& density, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const int g = density.grid_size();
    const double h = density.spacing();
    const int cell = std::min(g - 1, static_cast<int>(x / h));
    double below = 0.0;
    for (int j = 0; j < cell; ++j) below += 0.5 * h * (density.mass[j] + density.mass[j + 1]);
    const double d = x - density.points[cell];
    below += density.mass[cell] * d + (density.mass[cell + 1] - density.mass[cell]) * d * d / (2.0 * h);
    return std::clamp(below / density.integral(), 0.0, 1.0);
}

DensityEvolution solve_master_equation(double p, double q, std::int64_t m, const AccumulationSchedule& schedule,
                                       int grid_size) {
    check_split_and_preference(q, p);
    DensityEvolution out;
    out.snapshots.push_back(init_density(p, m, schedule, grid_size));
    for (int t = kFirstMinute + 1; t <= kLastMinute; ++t) {
        auto step = evolve_density_step(out.snapshots.back(), t, schedule, q, p, m);
        out.leakage.push_back(step.leakage);
        out.snapshots.push_back(std::move(step.density));
    }
    return out;
}

DivergenceReport compare_with_mc(double p, double q, std::int64_t m, const AccumulationSchedule& schedule,
                                 int grid_size, int replications, std::uint64_t base_seed,
                                 Parallelism parallelism) {
    DensityEvolution evolution;
    return compare_with_mc(p, q, m, schedule, grid_size, replications, base_seed, parallelism, evolution);
}

DivergenceReport compare_with_mc(double p, double q, std::int64_t m, const AccumulationSchedule& schedule,
                                 int grid_size, int replications, std::uint64_t base_seed, Parallelism parallelism,
                                 DensityEvolution& evolution) {
    check_split_and_preference(q, p);
    if (replications < 1000) throw ValidationError("compare_with_mc: need at least 1000 replications");

    const RaceConfig config{2, m, 0.0};
    ConsensusDistribution consensus;
    consensus.n_horses = 2;
    consensus.decay = std::log(p / (1.0 - p));
    consensus.probs = Eigen::Vector2d(p, 1.0 - p);
    consensus.norm_const = p / std::exp(-consensus.decay);
    PreferenceDistribution preference;
    preference.n_horses = 2;
    preference.sharpness = std::log2(q / (1.0 - q));
    preference.probs = Eigen::Vector2d(q, 1.0 - q);
    preference.norm_const = q;

    std::vector<double> finals(static_cast<std::size_t>(replications));
    parallel_for(finals.size(), parallelism, [&](std::size_t r) {
        const auto result = simulate_race(config, consensus, preference, schedule, replication_seed(base_seed, 0, r));
        finals[r] = result.final_fractions[0];
    });

    DivergenceReport report;
    report.p = p;
    report.q = q;
    report.m = m;
    report.schedule = schedule.label();
    report.grid_size = grid_size;
    report.replications = replications;
    report.base_seed = base_seed;

    double sum = 0.0;
    for (double v : finals) sum += v;
    report.mc_mean = sum / replications;
    double sum_sq = 0.0;
    for (double v : finals) sum_sq += (v - report.mc_mean) * (v - report.mc_mean);
    report.mc_std = std::sqrt(sum_sq / (replications - 1));
    report.mc_stderr = report.mc_std / std::sqrt(static_cast<double>(replications));

    evolution = solve_master_equation(p, q, m, schedule, grid_size);
    const auto& final_density = evolution.snapshots.back();
    const auto moments = density_stats(final_density);
    report.pde_mean = moments.mean;
    report.pde_std = std::sqrt(moments.variance);
    report.leakage = evolution.leakage;
    report.max_leakage = 0.0;
    for (double l : evolution.leakage) report.max_leakage = std::max(report.max_leakage, std::abs(l));

    report.abs_delta_mean = std::abs(report.pde_mean - report.mc_mean);
    report.rel_delta_std = std::abs(report.pde_std - report.mc_std) / report.mc_std;

    std::sort(finals.begin(), finals.end());
    const double n = static_cast<double>(finals.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < finals.size(); ++i) {
        const double model = density_cdf(final_density, finals[i]);
        sup = std::max({sup, std::abs((i + 1) / n - model), std::abs(i / n - model)});
    }
    report.cdf_sup_distance = sup;
    return report;
}

}  // namespace parimutuel
