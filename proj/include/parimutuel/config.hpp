#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "parimutuel/distributions.hpp"
#include "parimutuel/experiments.hpp"
#include "parimutuel/master_equation.hpp"
#include "parimutuel/race.hpp"

namespace parimutuel {

enum class RunMode { Simulate, Sweep, MasterEq, Fit };
enum class OutputFormat { Csv, Json };

std::string_view to_string(RunMode mode);
std::string_view to_string(OutputFormat format);
RunMode run_mode_from_string(std::string_view text);
OutputFormat output_format_from_string(std::string_view text);

/// Effective settings of one CLI run. Defaults reproduce the standard setup:
/// 14 horses, 200000 units, 2000 replications, the full a and b grids and
/// the 0.35-growth schedule.
struct RunConfig {
    RunMode mode = RunMode::Sweep;
    std::vector<double> a_values = default_a_grid();
    std::vector<double> b_values = default_b_grid();
    // "0.35-growth" style names, bare kinds ("growth") combined with
    // pre_fraction, or paths to "t,F" CSV files.
    std::vector<std::string> schedules = {"0.35-growth"};
    double pre_fraction = 0.35;
    int replications = 2000;
    std::uint64_t seed = 0;
    std::string out;  // empty: parimutuel_<mode>.<format>
    OutputFormat format = OutputFormat::Csv;
    unsigned parallel = 1;  // 0 = auto
    RaceConfig race;
    // master-eq
    int grid_size = kDefaultGridSize;
    double p = 0.6;
    double q = 2.0 / 3.0;
    // simulate
    bool trajectory = false;
    // fit
    std::vector<int> fit_orders = {1, 3};

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    /// Throws ConfigError naming the first offending field.
    void validate() const;
    std::filesystem::path output_path() const;
    Parallelism parallelism() const { return {parallel}; }
};

/// Parses "0.25", "1/400", "4" (whitespace tolerated).
double parse_number(std::string_view text, std::string_view field);
/// Comma-separated list of parse_number values.
std::vector<double> parse_number_list(std::string_view text, std::string_view field);
/// "auto" or a positive integer.
unsigned parse_parallel(std::string_view text);

/// Overlays keys of `doc` onto `base`. Unknown keys are rejected.
RunConfig merge_config(RunConfig base, const nlohmann::json& doc);
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& config);

/// Resolves schedule names and files into schedules.
std::vector<AccumulationSchedule> resolve_schedules(const RunConfig& config);
AccumulationSchedule resolve_schedule(std::string_view spec, double pre_fraction);

ExperimentPlan make_plan(const RunConfig& config);

}  // namespace parimutuel
