#include "parimutuel/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "parimutuel/error.hpp"

namespace parimutuel {

namespace {

int slot(int minute) { return minute - kFirstMinute; }

std::string format_fraction(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", value);
    return buf;
}

void check_pre_fraction(double pre_fraction) {
    if (!(pre_fraction > 0.0 && pre_fraction < 1.0)) {
        throw ValidationError("pre_fraction must lie in (0, 1), got " + format_fraction(pre_fraction));
    }
}

}  // namespace

ConsensusDistribution make_consensus(double a, int n) {
    if (n < 2) throw ValidationError("consensus distribution needs at least 2 horses");
    if (!(a >= 0.0) || !std::isfinite(a)) {
        throw ValidationError("consensus decay a must be finite and >= 0, got " + format_fraction(a));
    }
    Eigen::VectorXd weights(n);
    for (int i = 0; i < n; ++i) weights[i] = std::exp(-a * (i + 1));
    const double total = weights.sum();

    ConsensusDistribution out;
    out.n_horses = n;
    out.decay = a;
    out.norm_const = 1.0 / total;
    out.probs = weights / total;
    return out;
}

PreferenceDistribution make_preference(double b, int n) {
    if (n < 2) throw ValidationError("preference distribution needs at least 2 horses");
    if (!(b >= 0.0) || !std::isfinite(b)) {
        throw ValidationError("preference sharpness b must be finite and >= 0, got " + format_fraction(b));
    }
    Eigen::VectorXd weights(n);
    for (int rank = 1; rank <= n; ++rank) {
        weights[rank - 1] = std::pow(static_cast<double>(n + 1 - rank) / n, b);
    }
    const double total = weights.sum();

    PreferenceDistribution out;
    out.n_horses = n;
    out.sharpness = b;
    out.norm_const = 1.0 / total;
    out.probs = weights / total;
    return out;
}

std::string_view to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::ExpGrowth: return "growth";
        case ScheduleKind::Linear: return "linear";
        case ScheduleKind::ExpDecay: return "decay";
        case ScheduleKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

ScheduleKind schedule_kind_from_string(std::string_view name) {
    if (name == "growth" || name == "exp-growth") return ScheduleKind::ExpGrowth;
    if (name == "linear") return ScheduleKind::Linear;
    if (name == "decay" || name == "exp-decay") return ScheduleKind::ExpDecay;
    if (name == "tabulated") return ScheduleKind::Tabulated;
    throw ValidationError("unknown schedule kind '" + std::string(name) + "'");
}

AccumulationSchedule::AccumulationSchedule(ScheduleKind kind, const Cumulative& cumulative,
                                           std::string label)
    : kind_(kind), cumulative_(cumulative), label_(std::move(label)) {
    check_pre_fraction(cumulative_.front());
    if (cumulative_.back() != 1.0) {
        throw ValidationError("schedule '" + label_ + "': F(0) must equal 1, got " +
                              format_fraction(cumulative_.back()));
    }
    for (int i = 1; i <= kWindowMinutes; ++i) {
        const double step = cumulative_[i] - cumulative_[i - 1];
        if (!std::isfinite(cumulative_[i]) || step < 0.0) {
            throw ValidationError("schedule '" + label_ + "': F(t) decreases at t = " +
                                  std::to_string(kFirstMinute + i));
        }
        increments_[i - 1] = step;
    }
}

double AccumulationSchedule::cumulative(int minute) const {
    if (minute < kFirstMinute || minute > kLastMinute) {
        throw std::out_of_range("minute " + std::to_string(minute) + " outside [-20, 0]");
    }
    return cumulative_[slot(minute)];
}

double AccumulationSchedule::increment(int minute) const {
    if (minute <= kFirstMinute || minute > kLastMinute) {
        throw std::out_of_range("increment minute " + std::to_string(minute) + " outside [-19, 0]");
    }
    return increments_[slot(minute) - 1];
}

AccumulationSchedule make_schedule(ScheduleKind kind, double pre_fraction) {
    check_pre_fraction(pre_fraction);
    AccumulationSchedule::Cumulative table{};
    for (int t = kFirstMinute; t <= kLastMinute; ++t) {
        const double x = static_cast<double>(t) / kWindowMinutes;
        double value = 0.0;
        switch (kind) {
            case ScheduleKind::ExpGrowth: value = std::pow(pre_fraction, -x); break;
            case ScheduleKind::Linear: value = 1.0 + (1.0 - pre_fraction) * x; break;
            case ScheduleKind::ExpDecay: value = (1.0 + pre_fraction) - std::pow(pre_fraction, 1.0 + x); break;
            case ScheduleKind::Tabulated:
                throw ValidationError("tabulated schedules are built from data, not a closed form");
        }
        table[slot(t)] = value;
    }
    // Endpoints are pinned; the closed forms can miss them by an ulp.
    table.front() = pre_fraction;
    table.back() = 1.0;
    return AccumulationSchedule(kind, table, format_fraction(pre_fraction) + "-" + std::string(to_string(kind)));
}

AccumulationSchedule make_tabulated_schedule(const std::map<int, double>& series, std::string label) {
    AccumulationSchedule::Cumulative table{};
    for (int t = kFirstMinute; t <= kLastMinute; ++t) {
        const auto it = series.find(t);
        if (it == series.end()) {
            throw ValidationError("schedule '" + label + "': missing minute t = " + std::to_string(t));
        }
        table[slot(t)] = it->second;
    }
    for (const auto& [t, value] : series) {
        if (t < kFirstMinute || t > kLastMinute) {
            throw ValidationError("schedule '" + label + "': minute t = " + std::to_string(t) +
                                  " outside [-20, 0]");
        }
        (void)value;
    }
    return AccumulationSchedule(ScheduleKind::Tabulated, table, std::move(label));
}

AccumulationSchedule schedule_from_name(std::string_view name) {
    const auto dash = name.find('-');
    if (dash == std::string_view::npos || dash == 0) {
        throw ValidationError("schedule name '" + std::string(name) + "' is not of the form <pre>-<kind>");
    }
    const std::string pre_text(name.substr(0, dash));
    double pre = 0.0;
    try {
        std::size_t used = 0;
        pre = std::stod(pre_text, &used);
        if (used != pre_text.size()) throw std::invalid_argument(pre_text);
    } catch (const std::exception&) {
        throw ValidationError("schedule name '" + std::string(name) + "' has a non-numeric pre-fraction");
    }
    const ScheduleKind kind = schedule_kind_from_string(name.substr(dash + 1));
    return make_schedule(kind, pre);
}

std::vector<AccumulationSchedule> standard_schedules() {
    std::vector<AccumulationSchedule> out;
    for (double pre : {0.35, 0.01}) {
        for (auto kind : {ScheduleKind::ExpGrowth, ScheduleKind::Linear, ScheduleKind::ExpDecay}) {
            out.push_back(make_schedule(kind, pre));
        }
    }
    return out;
}

std::int64_t prebet_count(const AccumulationSchedule& schedule, std::int64_t m) {
    if (m < 1) throw ValidationError("total units m must be >= 1");
    return std::llround(static_cast<double>(m) * schedule.pre_fraction());
}

std::array<std::int64_t, kWindowMinutes> minute_bet_counts(const AccumulationSchedule& schedule,
                                                           std::int64_t m) {
    if (m < 1) throw ValidationError("total units m must be >= 1");
    const auto& table = schedule.cumulative_table();
    std::array<std::int64_t, kWindowMinutes> counts{};
    std::int64_t previous = std::llround(static_cast<double>(m) * table[0]);
    for (int i = 1; i <= kWindowMinutes; ++i) {
        const std::int64_t current = std::llround(static_cast<double>(m) * table[i]);
        counts[i - 1] = current - previous;
        previous = current;
    }
    return counts;
}

std::vector<double> default_a_grid() { return {0.05, 0.1, 0.3, 0.5, 1.3}; }

std::vector<double> default_b_grid() {
    return {1.0 / 400, 1.0 / 54, 1.0 / 20, 1.0 / 7, 1.0 / 4, 1.0 / 2, 1.0, 2.0, 4.0, 7.0, 20.0, 54.0, 400.0};
}

}  // namespace parimutuel
