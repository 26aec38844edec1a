#include "parimutuel/experiments.hpp"

#include <cmath>

#include "parimutuel/error.hpp"
#include "parimutuel/rng.hpp"

namespace parimutuel {

void ExperimentPlan::validate() const {
    if (a_values.empty()) throw ConfigError("a", "grid must be nonempty");
    if (b_values.empty()) throw ConfigError("b", "grid must be nonempty");
    if (schedules.empty()) throw ConfigError("schedule", "at least one schedule required");
    if (replications < 1) throw ConfigError("reps", "must be >= 1");
    for (double a : a_values) {
        if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("a", "values must be finite and >= 0");
    }
    for (double b : b_values) {
        if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("b", "values must be finite and >= 0");
    }
    config.validate();
}

Eigen::MatrixXd replicate_cell(const PlanCell& cell, const RaceConfig& config, int replications,
                               std::uint64_t base_seed, Parallelism parallelism) {
    if (replications < 1) throw ValidationError("replications must be >= 1");
    const auto consensus = make_consensus(cell.a, config.n_horses);
    const auto preference = make_preference(cell.b, config.n_horses);

    Eigen::MatrixXd finals(replications, config.n_horses);
    parallel_for(static_cast<std::size_t>(replications), parallelism, [&](std::size_t r) {
        const auto seed = replication_seed(base_seed, cell.index, r);
        const auto result = simulate_race(config, consensus, preference, cell.schedule, seed);
        finals.row(static_cast<Eigen::Index>(r)) = result.final_fractions.transpose();
    });
    return finals;
}

BiasSummary run_point(const PlanCell& cell, const RaceConfig& config, int replications, std::uint64_t base_seed,
                      Parallelism parallelism) {
    const Eigen::MatrixXd finals = replicate_cell(cell, config, replications, base_seed, parallelism);
    const Eigen::Index n = finals.cols();

    BiasSummary out;
    out.a = cell.a;
    out.b = cell.b;
    out.schedule = cell.schedule.label();
    out.replications = replications;
    out.base_seed = base_seed;
    out.cell_index = cell.index;
    out.p = make_consensus(cell.a, config.n_horses).probs;
    out.mean_v = Eigen::VectorXd::Zero(n);
    out.stderr_v = Eigen::VectorXd::Zero(n);

    // Two-pass mean/variance in fixed row order.
    for (Eigen::Index r = 0; r < finals.rows(); ++r) out.mean_v += finals.row(r).transpose();
    out.mean_v /= static_cast<double>(replications);
    if (replications > 1) {
        Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(n);
        for (Eigen::Index r = 0; r < finals.rows(); ++r) {
            sum_sq += (finals.row(r).transpose() - out.mean_v).array().square().matrix();
        }
        const double var_scale = 1.0 / (static_cast<double>(replications - 1) * replications);
        out.stderr_v = (sum_sq * var_scale).cwiseSqrt();
    }
    return out;
}

std::vector<BiasSummary> sweep(const ExperimentPlan& plan, Parallelism parallelism) {
    plan.validate();
    std::vector<BiasSummary> out;
    out.reserve(plan.cell_count());
    std::uint64_t index = 0;
    for (double a : plan.a_values) {
        for (double b : plan.b_values) {
            for (const auto& schedule : plan.schedules) {
                const PlanCell cell{a, b, schedule, index};
                try {
                    out.push_back(run_point(cell, plan.config, plan.replications, plan.base_seed, parallelism));
                } catch (const std::exception& e) {
                    throw std::runtime_error("sweep cell " + std::to_string(index) + " (a=" + std::to_string(a) +
                                             ", b=" + std::to_string(b) + ", schedule=" + schedule.label() +
                                             ") failed: " + e.what());
                }
                ++index;
            }
        }
    }
    return out;
}

std::pair<double, double> best_b(const std::vector<BiasSummary>& summaries) {
    if (summaries.empty()) throw ValidationError("best_b: no summaries");
    const auto& first = summaries.front();
    const BiasSummary* best = nullptr;
    for (const auto& s : summaries) {
        if (s.a != first.a || s.schedule != first.schedule) {
            throw ValidationError("best_b: summaries must share a and schedule");
        }
        const double r = s.mean_v[0] / s.p[0];
        if (best == nullptr) {
            best = &s;
            continue;
        }
        const double best_r = best->mean_v[0] / best->p[0];
        if (r > best_r || (r == best_r && s.b < best->b)) best = &s;
    }
    return {best->b, best->mean_v[0] / best->p[0]};
}

}  // namespace parimutuel
