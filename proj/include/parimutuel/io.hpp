#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "parimutuel/distributions.hpp"
#include "parimutuel/experiments.hpp"
#include "parimutuel/fit.hpp"
#include "parimutuel/master_equation.hpp"
#include "parimutuel/race.hpp"

namespace parimutuel::io {

/// 17 significant digits; "inf" / "-inf" / "nan" for non-finite values.
std::string format_number(double value);

/// One simulated race with the parameters that produced it.
struct RaceReport {
    double a = 0.0;
    double b = 0.0;
    std::string schedule;
    Eigen::VectorXd p;
    RaceResult result;
};

/// CSV columns: seed,horse,rank_by_p,p,V_final,odds (horse and rank 1-based).
std::string race_csv(const RaceReport& report);
nlohmann::json race_json(const RaceReport& report);
/// minute,horse,V rows; empty body when no trajectory was recorded.
std::string trajectory_csv(const RaceReport& report);

/// CSV columns: a,b,schedule,rank,p,mean_V,stderr,ratio,replications,base_seed.
std::string sweep_csv(const std::vector<BiasSummary>& summaries);
nlohmann::json sweep_json(const std::vector<BiasSummary>& summaries);

std::string fit_csv(const std::vector<FitResult>& fits);
nlohmann::json fit_json(const std::vector<FitResult>& fits);

/// Two columns k,P.
std::string density_csv(const DensityGrid& density);
nlohmann::json divergence_json(const DivergenceReport& report);

/// Pretty JSON with a trailing newline.
std::string dump(const nlohmann::json& value);

/// Writes `content` to `path`, or to stdout when path is "-".
void write_text(const std::filesystem::path& path, const std::string& content);

/// Reads a "t,F" CSV into a map; rejects malformed rows and duplicate minutes.
std::map<int, double> read_series_csv(const std::filesystem::path& path);

/// Tabulated schedule from a "t,F" CSV covering every minute of [-20, 0].
AccumulationSchedule ingest_series(const std::filesystem::path& path);

/// "t,F" CSV of a schedule's cumulative table.
std::string schedule_csv(const AccumulationSchedule& schedule);

}  // namespace parimutuel::io
