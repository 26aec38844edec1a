#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace parimutuel {

/// Betting window: integer minutes t = -20..0, race starts at t = 0.
inline constexpr int kFirstMinute = -20;
inline constexpr int kLastMinute = 0;
inline constexpr int kWindowMinutes = kLastMinute - kFirstMinute;  // 20 in-window steps

/// Shared winning-strength vector, p_i proportional to exp(-a i).
struct ConsensusDistribution {
    int n_horses = 0;
    double decay = 0.0;        // a
    Eigen::VectorXd probs;     // p_1..p_N, nonincreasing, sums to 1
    double norm_const = 0.0;   // C_a
};

/// Probability that a unit bet goes to the n-th most attractive horse,
/// q_n proportional to ((N + 1 - n) / N)^b.
struct PreferenceDistribution {
    int n_horses = 0;
    double sharpness = 0.0;    // b
    Eigen::VectorXd probs;     // q_1..q_N, nonincreasing, sums to 1
    double norm_const = 0.0;   // D_b
};

ConsensusDistribution make_consensus(double a, int n);
PreferenceDistribution make_preference(double b, int n);

enum class ScheduleKind { ExpGrowth, Linear, ExpDecay, Tabulated };

std::string_view to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(std::string_view name);

/// Cumulative bet-arrival profile F(t) over the window.
///
/// F(-20) is the pre-bettor fraction and F(0) = 1, both stored exactly.
/// Increments f(t) = F(t) - F(t-1) are defined for t = -19..0.
class AccumulationSchedule {
public:
    using Cumulative = std::array<double, kWindowMinutes + 1>;
    using Increments = std::array<double, kWindowMinutes>;

    /// Validates and takes ownership of a full F(-20..0) table.
    AccumulationSchedule(ScheduleKind kind, const Cumulative& cumulative, std::string label);

    ScheduleKind kind() const noexcept { return kind_; }
    double pre_fraction() const noexcept { return cumulative_.front(); }
    const std::string& label() const noexcept { return label_; }

    double cumulative(int minute) const;  // F(t), t in [-20, 0]
    double increment(int minute) const;   // f(t), t in [-19, 0]

    const Cumulative& cumulative_table() const noexcept { return cumulative_; }
    const Increments& increment_table() const noexcept { return increments_; }

    friend bool operator==(const AccumulationSchedule&, const AccumulationSchedule&) = default;

private:
    ScheduleKind kind_;
    Cumulative cumulative_{};
    Increments increments_{};
    std::string label_;
};

/// Closed-form schedules:
///   exp-growth  F(t) = pre^(-t/20)
///   linear      F(t) = 1 + (1 - pre) t / 20
///   exp-decay   F(t) = (1 + pre) - pre^(1 + t/20)
/// Labels follow the "0.35-growth" convention.
AccumulationSchedule make_schedule(ScheduleKind kind, double pre_fraction);

/// Arbitrary F(t) covering every minute of [-20, 0].
AccumulationSchedule make_tabulated_schedule(const std::map<int, double>& series,
                                             std::string label = "tabulated");

/// Resolves "0.35-growth" / "0.01-linear" / "0.35-decay" style names.
AccumulationSchedule schedule_from_name(std::string_view name);

/// The six closed-form schedules: {0.35, 0.01} x {growth, linear, decay}.
std::vector<AccumulationSchedule> standard_schedules();

/// Integer unit bets placed in each minute t = -19..0 (index t + 19).
/// Uses rounded cumulative differences so the window total plus
/// round(m F(-20)) is exactly m.
std::array<std::int64_t, kWindowMinutes> minute_bet_counts(const AccumulationSchedule& schedule,
                                                           std::int64_t m);

/// round(m F(-20)).
std::int64_t prebet_count(const AccumulationSchedule& schedule, std::int64_t m);

std::vector<double> default_a_grid();
std::vector<double> default_b_grid();

}  // namespace parimutuel
