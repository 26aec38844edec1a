// parimutuel: pari-mutuel betting simulations, bias sweeps, the two-horse
// density solver and accumulation-curve fits.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "parimutuel/config.hpp"
#include "parimutuel/error.hpp"
#include "parimutuel/io.hpp"

namespace {

using namespace parimutuel;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
    return out.string() + suffix;
}

void run_simulate(const RunConfig& config) {
    const auto schedule = resolve_schedules(config).front();
    const double a = config.a_values.front();
    const double b = config.b_values.front();
    const auto consensus = make_consensus(a, config.race.n_horses);
    const auto preference = make_preference(b, config.race.n_horses);

    io::RaceReport report;
    report.a = a;
    report.b = b;
    report.schedule = schedule.label();
    report.p = consensus.probs;
    report.result = simulate_race(config.race, consensus, preference, schedule, config.seed, config.trajectory);

    const auto out = config.output_path();
    if (config.format == OutputFormat::Json) {
        io::write_text(out, io::dump(io::race_json(report)));
    } else {
        io::write_text(out, io::race_csv(report));
        if (config.trajectory && out != "-") io::write_text(sibling(out, ".trajectory.csv"), io::trajectory_csv(report));
    }
}

void run_sweep(const RunConfig& config) {
    const auto summaries = sweep(make_plan(config), config.parallelism());
    const auto out = config.output_path();
    if (config.format == OutputFormat::Json) {
        io::write_text(out, io::dump(io::sweep_json(summaries)));
    } else {
        io::write_text(out, io::sweep_csv(summaries));
    }
}

void run_master_eq(const RunConfig& config) {
    const auto schedule = resolve_schedules(config).front();
    DensityEvolution evolution;
    const auto report = compare_with_mc(config.p, config.q, config.race.total_units, schedule, config.grid_size,
                                        config.replications, config.seed, config.parallelism(), evolution);
    const auto out = config.output_path();
    if (config.format == OutputFormat::Json) {
        io::write_text(out, io::dump(io::divergence_json(report)));
        return;
    }
    io::write_text(out, io::density_csv(evolution.snapshots.back()));
    if (out != "-") {
        for (const auto& snapshot : evolution.snapshots) {
            io::write_text(sibling(out, ".t" + std::to_string(snapshot.minute) + ".csv"), io::density_csv(snapshot));
        }
        io::write_text(sibling(out, ".divergence.json"), io::dump(io::divergence_json(report)));
    }
}

void run_fit(const RunConfig& config) {
    const auto schedule = resolve_schedules(config).front();
    std::vector<FitResult> fits;
    for (int order : config.fit_orders) fits.push_back(fit_accumulation(schedule, order));
    const auto out = config.output_path();
    if (config.format == OutputFormat::Json) {
        io::write_text(out, io::dump(io::fit_json(fits)));
    } else {
        io::write_text(out, io::fit_csv(fits));
    }
}

void write_manifest(const RunConfig& config) {
    nlohmann::json manifest;
    manifest["tool"] = "parimutuel";
    manifest["config"] = config_to_json(config);
    auto labels = nlohmann::json::array();
    for (const auto& schedule : resolve_schedules(config)) labels.push_back(schedule.label());
    manifest["resolved_schedules"] = labels;
    manifest["output"] = config.output_path().string();

    const auto out = config.output_path();
    if (out == "-") {
        std::cerr << io::dump(manifest);
    } else {
        io::write_text(sibling(out, ".manifest.json"), io::dump(manifest));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pari-mutuel betting market simulator"};

    std::string config_path, mode, out, format, parallel, a_list, b_list, schedule;
    std::uint64_t seed = 0;
    int reps = 0, grid_size = 0, horses = 0;
    std::int64_t units = 0;
    double pre_fraction = 0.0, p = 0.0, q = 0.0, track_take = 0.0;
    bool trajectory = false;
    std::vector<int> orders;

    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    auto* mode_opt = app.add_option("--mode", mode, "simulate | sweep | master-eq | fit");
    auto* seed_opt = app.add_option("--seed", seed, "Base random seed");
    auto* reps_opt = app.add_option("--reps", reps, "Replications per parameter point");
    auto* out_opt = app.add_option("--out", out, "Output path ('-' for stdout)");
    auto* format_opt = app.add_option("--format", format, "csv | json");
    auto* parallel_opt = app.add_option("--parallel", parallel, "Worker threads or 'auto'");
    auto* a_opt = app.add_option("--a", a_list, "Consensus decay values, comma separated");
    auto* b_opt = app.add_option("--b", b_list, "Preference sharpness values, comma separated (1/400 allowed)");
    auto* schedule_opt = app.add_option("--schedule", schedule, "Schedule name(s) like 0.35-growth, or a t,F CSV path");
    auto* pre_opt = app.add_option("--pre-fraction", pre_fraction, "F(-20) for bare schedule kinds");
    auto* grid_opt = app.add_option("--grid-size", grid_size, "Density grid intervals (master-eq)");
    auto* p_opt = app.add_option("--p", p, "Favorite's consensus probability (master-eq)");
    auto* q_opt = app.add_option("--q", q, "Top-rank preference probability (master-eq)");
    auto* horses_opt = app.add_option("--horses", horses, "Number of horses");
    auto* units_opt = app.add_option("--m", units, "Total unit bets per race");
    auto* take_opt = app.add_option("--track-take", track_take, "Track take used for reported odds");
    auto* traj_opt = app.add_flag("--trajectory", trajectory, "Record per-minute fractions (simulate)");
    auto* order_opt = app.add_option("--order", orders, "Fit orders (1 and/or 3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        RunConfig config;
        if (!config_path.empty()) config = load_config_file(config_path, config);

        if (*mode_opt) config.mode = run_mode_from_string(mode);
        if (*seed_opt) config.seed = seed;
        if (*reps_opt) config.replications = reps;
        if (*out_opt) config.out = out;
        if (*format_opt) config.format = output_format_from_string(format);
        if (*parallel_opt) config.parallel = parse_parallel(parallel);
        if (*a_opt) config.a_values = parse_number_list(a_list, "a");
        if (*b_opt) config.b_values = parse_number_list(b_list, "b");
        if (*schedule_opt) {
            config.schedules.clear();
            std::size_t start = 0;
            while (true) {
                const auto comma = schedule.find(',', start);
                config.schedules.push_back(schedule.substr(start, comma - start));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }
        if (*pre_opt) config.pre_fraction = pre_fraction;
        if (*grid_opt) config.grid_size = grid_size;
        if (*p_opt) config.p = p;
        if (*q_opt) config.q = q;
        if (*horses_opt) config.race.n_horses = horses;
        if (*units_opt) config.race.total_units = units;
        if (*take_opt) config.race.track_take = track_take;
        if (*traj_opt) config.trajectory = trajectory;
        if (*order_opt) config.fit_orders = orders;

        config.validate();

        switch (config.mode) {
            case RunMode::Simulate: run_simulate(config); break;
            case RunMode::Sweep: run_sweep(config); break;
            case RunMode::MasterEq: run_master_eq(config); break;
            case RunMode::Fit: run_fit(config); break;
        }
        write_manifest(config);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
