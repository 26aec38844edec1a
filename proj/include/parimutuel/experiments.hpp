#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "parimutuel/distributions.hpp"
#include "parimutuel/parallel.hpp"
#include "parimutuel/race.hpp"

namespace parimutuel {

struct ExperimentPlan {
    std::vector<double> a_values = default_a_grid();
    std::vector<double> b_values = default_b_grid();
    std::vector<AccumulationSchedule> schedules = {make_schedule(ScheduleKind::ExpGrowth, 0.35)};
    int replications = 2000;
    std::uint64_t base_seed = 0;
    RaceConfig config;

    void validate() const;
    std::size_t cell_count() const { return a_values.size() * b_values.size() * schedules.size(); }
};

struct PlanCell {
    double a = 0.0;
    double b = 0.0;
    AccumulationSchedule schedule = make_schedule(ScheduleKind::ExpGrowth, 0.35);
    std::uint64_t index = 0;  // position in the sweep; feeds seed derivation
};

/// Per-horse aggregates of V_i(0) over the replications of one cell.
/// Horse i is the i-th favorite by consensus probability.
struct BiasSummary {
    double a = 0.0;
    double b = 0.0;
    std::string schedule;
    int replications = 0;
    std::uint64_t base_seed = 0;
    std::uint64_t cell_index = 0;
    Eigen::VectorXd p;
    Eigen::VectorXd mean_v;
    Eigen::VectorXd stderr_v;

    Eigen::VectorXd ratio() const { return mean_v.cwiseQuotient(p); }
    double ratio_stderr(Eigen::Index i) const { return stderr_v[i] / p[i]; }
    Eigen::Index size() const { return p.size(); }
};

/// Final fractions of every replication of a cell, row r = replication r.
Eigen::MatrixXd replicate_cell(const PlanCell& cell, const RaceConfig& config, int replications,
                               std::uint64_t base_seed, Parallelism parallelism = {});

/// Means and standard errors are accumulated in replication order, so the
/// result does not depend on the worker count.
BiasSummary run_point(const PlanCell& cell, const RaceConfig& config, int replications, std::uint64_t base_seed,
                      Parallelism parallelism = {});

/// One summary per (a, b, schedule), a outermost, schedule innermost.
std::vector<BiasSummary> sweep(const ExperimentPlan& plan, Parallelism parallelism = {});

/// b maximizing ratio_1 among summaries sharing a and schedule; ties go to the smaller b.
std::pair<double, double> best_b(const std::vector<BiasSummary>& summaries);

}  // namespace parimutuel
