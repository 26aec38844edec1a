#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "parimutuel/distributions.hpp"
#include "parimutuel/rng.hpp"

namespace parimutuel {

using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct RaceConfig {
    int n_horses = 14;
    std::int64_t total_units = 200000;  // m
    double track_take = 0.0;            // alpha; only affects reported odds

    void validate() const;
    friend bool operator==(const RaceConfig&, const RaceConfig&) = default;
};

/// Unit-bet counts per horse at the close of `minute`.
class RaceState {
public:
    RaceState(int minute, CountVector counts);

    int minute() const noexcept { return minute_; }
    const CountVector& counts() const noexcept { return counts_; }
    const Eigen::VectorXd& fractions() const noexcept { return fractions_; }  // V_i(t)
    std::int64_t total() const noexcept { return total_; }
    Eigen::Index size() const noexcept { return counts_.size(); }

    /// Adds `added` units per horse and advances one minute.
    void accumulate(const CountVector& added);

private:
    void refresh();

    int minute_;
    CountVector counts_;
    Eigen::VectorXd fractions_;
    std::int64_t total_ = 0;
};

/// order[n] is the 0-based horse index holding rank n + 1 by descending p_i / V_i.
struct Ranking {
    std::vector<int> order;
};

struct RaceResult {
    Eigen::VectorXd final_fractions;  // V_i(0)
    Eigen::VectorXd final_odds;       // (1 - alpha) / V_i(0)
    std::uint64_t seed = 0;
    std::optional<std::vector<Eigen::VectorXd>> trajectory;  // V(t) for t = -20..0
};

/// Pre-bettors: one multinomial sample of round(m F(-20)) units under p.
RaceState init_prebets(const RaceConfig& config, const ConsensusDistribution& consensus,
                       const AccumulationSchedule& schedule, RandomStream& rng);

/// Zero-count horses rank first (infinite ratio); exact ties go to the lower index.
Ranking rank_horses(const RaceState& state, const ConsensusDistribution& consensus);

/// One minute of betting against a fixed odds snapshot: `bet_count` units
/// split multinomially over ranks with probabilities q, credited to the
/// horse holding each rank.
RaceState step_minute(const RaceState& state, const Ranking& ranking, const PreferenceDistribution& preference,
                      std::int64_t bet_count, RandomStream& rng);

RaceResult simulate_race(const RaceConfig& config, const ConsensusDistribution& consensus,
                         const PreferenceDistribution& preference, const AccumulationSchedule& schedule,
                         std::uint64_t seed, bool record_trajectory = false);

}  // namespace parimutuel
