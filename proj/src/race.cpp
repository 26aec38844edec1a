#include "parimutuel/race.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "parimutuel/error.hpp"

namespace parimutuel {

void RaceConfig::validate() const {
    if (n_horses < 2) throw ConfigError("n_horses", "must be >= 2");
    if (total_units < n_horses) throw ConfigError("m", "total units must be >= n_horses");
    if (!(track_take >= 0.0 && track_take < 1.0)) throw ConfigError("track_take", "must lie in [0, 1)");
}

RaceState::RaceState(int minute, CountVector counts) : minute_(minute), counts_(std::move(counts)) {
    if ((counts_.array() < 0).any()) throw ValidationError("race state counts must be nonnegative");
    refresh();
}

void RaceState::accumulate(const CountVector& added) {
    counts_ += added;
    ++minute_;
    refresh();
}

void RaceState::refresh() {
    total_ = counts_.sum();
    if (total_ > 0) {
        fractions_ = counts_.cast<double>() / static_cast<double>(total_);
    } else {
        fractions_ = Eigen::VectorXd::Zero(counts_.size());
    }
}

RaceState init_prebets(const RaceConfig& config, const ConsensusDistribution& consensus,
                       const AccumulationSchedule& schedule, RandomStream& rng) {
    config.validate();
    if (consensus.n_horses != config.n_horses) {
        throw ValidationError("consensus has " + std::to_string(consensus.n_horses) + " horses, config has " +
                              std::to_string(config.n_horses));
    }
    const std::int64_t units = prebet_count(schedule, config.total_units);
    if (units < 1) {
        throw ValidationError("schedule '" + schedule.label() + "' leaves no pre-bets at m = " +
                              std::to_string(config.total_units));
    }
    CountVector counts(config.n_horses);
    sample_multinomial(units, consensus.probs, counts, rng);
    return RaceState(kFirstMinute, std::move(counts));
}

Ranking rank_horses(const RaceState& state, const ConsensusDistribution& consensus) {
    const auto n = state.size();
    if (consensus.probs.size() != n) throw ValidationError("ranking: consensus/state size mismatch");
    if (state.total() == 0) throw ValidationError("ranking undefined: no bets placed yet");

    // p_i / V_i = total * p_i / c_i; the common factor does not change the order.
    std::vector<double> ratio(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto c = state.counts()[i];
        ratio[static_cast<std::size_t>(i)] =
            c == 0 ? std::numeric_limits<double>::infinity() : consensus.probs[i] / static_cast<double>(c);
    }
    Ranking out;
    out.order.resize(static_cast<std::size_t>(n));
    std::iota(out.order.begin(), out.order.end(), 0);
    std::sort(out.order.begin(), out.order.end(), [&](int lhs, int rhs) {
        const double l = ratio[static_cast<std::size_t>(lhs)];
        const double r = ratio[static_cast<std::size_t>(rhs)];
        return l != r ? l > r : lhs < rhs;
    });
    return out;
}

RaceState step_minute(const RaceState& state, const Ranking& ranking, const PreferenceDistribution& preference,
                      std::int64_t bet_count, RandomStream& rng) {
    const auto n = state.size();
    if (bet_count < 0) throw ValidationError("bet_count must be >= 0");
    if (static_cast<Eigen::Index>(ranking.order.size()) != n || preference.probs.size() != n) {
        throw ValidationError("step_minute: ranking/preference/state dimension mismatch");
    }
    CountVector by_rank(n);
    sample_multinomial(bet_count, preference.probs, by_rank, rng);

    CountVector added = CountVector::Zero(n);
    for (Eigen::Index rank = 0; rank < n; ++rank) added[ranking.order[static_cast<std::size_t>(rank)]] += by_rank[rank];

    RaceState next = state;
    next.accumulate(added);
    return next;
}

RaceResult simulate_race(const RaceConfig& config, const ConsensusDistribution& consensus,
                         const PreferenceDistribution& preference, const AccumulationSchedule& schedule,
                         std::uint64_t seed, bool record_trajectory) {
    if (preference.n_horses != config.n_horses) {
        throw ValidationError("preference has " + std::to_string(preference.n_horses) + " horses, config has " +
                              std::to_string(config.n_horses));
    }
    RandomStream rng(seed);
    RaceState state = init_prebets(config, consensus, schedule, rng);
    const auto counts = minute_bet_counts(schedule, config.total_units);

    RaceResult result;
    result.seed = seed;
    if (record_trajectory) result.trajectory.emplace().push_back(state.fractions());

    for (std::size_t step = 0; step < counts.size(); ++step) {
        const Ranking ranking = rank_horses(state, consensus);
        state = step_minute(state, ranking, preference, counts[step], rng);
        if (record_trajectory) result.trajectory->push_back(state.fractions());
    }

    result.final_fractions = state.fractions();
    result.final_odds = (1.0 - config.track_take) / result.final_fractions.array();
    return result;
}

}  // namespace parimutuel
