#include "parimutuel/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "parimutuel/error.hpp"

namespace parimutuel::io {

namespace {

nlohmann::json number_json(double value) {
    if (std::isfinite(value)) return value;
    return nullptr;
}

nlohmann::json vector_json(const Eigen::VectorXd& values) {
    auto out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < values.size(); ++i) out.push_back(number_json(values[i]));
    return out;
}

// 1-based rank of each horse by descending p, ties by index.
std::vector<int> ranks_by_probability(const Eigen::VectorXd& p) {
    std::vector<int> order(static_cast<std::size_t>(p.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return p[l] > p[r]; });
    std::vector<int> rank(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) rank[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos) + 1;
    return rank;
}

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string race_csv(const RaceReport& report) {
    std::ostringstream out;
    out << "seed,horse,rank_by_p,p,V_final,odds\n";
    const auto ranks = ranks_by_probability(report.p);
    for (Eigen::Index i = 0; i < report.p.size(); ++i) {
        out << report.result.seed << ',' << i + 1 << ',' << ranks[static_cast<std::size_t>(i)] << ','
            << format_number(report.p[i]) << ',' << format_number(report.result.final_fractions[i]) << ','
            << format_number(report.result.final_odds[i]) << '\n';
    }
    return out.str();
}

nlohmann::json race_json(const RaceReport& report) {
    nlohmann::json out;
    out["seed"] = report.result.seed;
    out["a"] = report.a;
    out["b"] = report.b;
    out["schedule"] = report.schedule;
    out["p"] = vector_json(report.p);
    out["final_fractions"] = vector_json(report.result.final_fractions);
    out["final_odds"] = vector_json(report.result.final_odds);
    if (report.result.trajectory) {
        auto rows = nlohmann::json::array();
        for (const auto& v : *report.result.trajectory) rows.push_back(vector_json(v));
        out["trajectory"] = std::move(rows);
    }
    return out;
}

std::string trajectory_csv(const RaceReport& report) {
    std::ostringstream out;
    out << "minute,horse,V\n";
    if (!report.result.trajectory) return out.str();
    int minute = kFirstMinute;
    for (const auto& v : *report.result.trajectory) {
        for (Eigen::Index i = 0; i < v.size(); ++i) out << minute << ',' << i + 1 << ',' << format_number(v[i]) << '\n';
        ++minute;
    }
    return out.str();
}

std::string sweep_csv(const std::vector<BiasSummary>& summaries) {
    std::ostringstream out;
    out << "a,b,schedule,rank,p,mean_V,stderr,ratio,replications,base_seed\n";
    for (const auto& s : summaries) {
        const Eigen::VectorXd ratio = s.ratio();
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            out << format_number(s.a) << ',' << format_number(s.b) << ',' << s.schedule << ',' << i + 1 << ','
                << format_number(s.p[i]) << ',' << format_number(s.mean_v[i]) << ',' << format_number(s.stderr_v[i])
                << ',' << format_number(ratio[i]) << ',' << s.replications << ',' << s.base_seed << '\n';
        }
    }
    return out.str();
}

nlohmann::json sweep_json(const std::vector<BiasSummary>& summaries) {
    auto out = nlohmann::json::array();
    for (const auto& s : summaries) {
        const Eigen::VectorXd ratio = s.ratio();
        auto per_rank = nlohmann::json::array();
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            per_rank.push_back({{"rank", i + 1},
                                {"p", number_json(s.p[i])},
                                {"mean_V", number_json(s.mean_v[i])},
                                {"stderr", number_json(s.stderr_v[i])},
                                {"ratio", number_json(ratio[i])}});
        }
        out.push_back({{"a", s.a},
                       {"b", s.b},
                       {"schedule", s.schedule},
                       {"replications", s.replications},
                       {"base_seed", s.base_seed},
                       {"cell_index", s.cell_index},
                       {"per_rank", std::move(per_rank)}});
    }
    return out;
}

std::string fit_csv(const std::vector<FitResult>& fits) {
    std::ostringstream out;
    out << "order,residual_sum,c0,c1,c2,c3\n";
    for (const auto& fit : fits) {
        out << fit.model_order << ',' << format_number(fit.residual_sum);
        for (Eigen::Index k = 0; k < 4; ++k) {
            out << ',';
            if (k < fit.coefficients.size()) out << format_number(fit.coefficients[k]);
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::json fit_json(const std::vector<FitResult>& fits) {
    auto out = nlohmann::json::array();
    for (const auto& fit : fits) {
        out.push_back({{"order", fit.model_order},
                       {"coefficients", vector_json(fit.coefficients)},
                       {"residual_sum", fit.residual_sum}});
    }
    return out;
}

std::string density_csv(const DensityGrid& density) {
    std::ostringstream out;
    out << "k,P\n";
    for (Eigen::Index j = 0; j < density.points.size(); ++j) {
        out << format_number(density.points[j]) << ',' << format_number(density.mass[j]) << '\n';
    }
    return out.str();
}

nlohmann::json divergence_json(const DivergenceReport& report) {
    return {{"p", report.p},
            {"q", report.q},
            {"m", report.m},
            {"schedule", report.schedule},
            {"grid_size", report.grid_size},
            {"replications", report.replications},
            {"base_seed", report.base_seed},
            {"mc_mean", report.mc_mean},
            {"mc_std", report.mc_std},
            {"mc_stderr", report.mc_stderr},
            {"pde_mean", report.pde_mean},
            {"pde_std", report.pde_std},
            {"abs_delta_mean", report.abs_delta_mean},
            {"rel_delta_std", report.rel_delta_std},
            {"cdf_sup_distance", report.cdf_sup_distance},
            {"max_leakage", report.max_leakage},
            {"leakage", report.leakage}};
}

std::string dump(const nlohmann::json& value) { return value.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    file << content;
    if (!file) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::map<int, double> read_series_csv(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ValidationError("cannot read series file '" + path.string() + "'");
    std::string line;
    if (!std::getline(file, line) || trim(line) != "t,F") {
        throw ValidationError("series file '" + path.string() + "': expected header 't,F'");
    }
    std::map<int, double> series;
    int line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (comma == std::string::npos) throw ValidationError(where + ": expected two columns");
        const std::string t_text = trim(row.substr(0, comma));
        const std::string f_text = trim(row.substr(comma + 1));
        int t = 0;
        double value = 0.0;
        try {
            std::size_t used = 0;
            t = std::stoi(t_text, &used);
            if (used != t_text.size()) throw std::invalid_argument(t_text);
            value = std::stod(f_text, &used);
            if (used != f_text.size()) throw std::invalid_argument(f_text);
        } catch (const std::exception&) {
            throw ValidationError(where + ": cannot parse '" + row + "'");
        }
        if (!series.emplace(t, value).second) {
            throw ValidationError(where + ": duplicate minute t = " + std::to_string(t));
        }
    }
    return series;
}

AccumulationSchedule ingest_series(const std::filesystem::path& path) {
    return make_tabulated_schedule(read_series_csv(path), path.stem().string());
}

std::string schedule_csv(const AccumulationSchedule& schedule) {
    std::ostringstream out;
    out << "t,F\n";
    const auto& table = schedule.cumulative_table();
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << kFirstMinute + static_cast<int>(i) << ',' << format_number(table[i]) << '\n';
    }
    return out.str();
}

}  // namespace parimutuel::io
