#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "parimutuel/config.hpp"
#include "parimutuel/error.hpp"
#include "parimutuel/io.hpp"

using namespace parimutuel;

namespace {

const std::filesystem::path kData = PARIMUTUEL_TEST_DATA_DIR;

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

std::vector<BiasSummary> small_sweep() {
    ExperimentPlan plan;
    plan.a_values = {0.3};
    plan.b_values = {1.0 / 400, 4.0};
    plan.replications = 10;
    plan.base_seed = 3;
    plan.config.total_units = 5000;
    return sweep(plan);
}

std::filesystem::path scratch_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("parimutuel_test_" + name);
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("format_number") {
    CHECK(io::format_number(0.1) == "0.10000000000000001");
    CHECK(io::format_number(2.0) == "2");
    CHECK(io::format_number(INFINITY) == "inf");
    CHECK(io::format_number(-INFINITY) == "-inf");
    CHECK(io::format_number(NAN) == "nan");
    for (double x : {1.0 / 3, 0.2631275283837429, 1e-300, 123456.789}) CHECK(std::stod(io::format_number(x)) == x);
}

TEST_CASE("sweep CSV and JSON agree") {
    const auto summaries = small_sweep();
    const auto csv = io::sweep_csv(summaries);
    const auto rows = lines(csv);
    REQUIRE(rows.size() == 1 + 2 * 14);
    CHECK(rows[0] == "a,b,schedule,rank,p,mean_V,stderr,ratio,replications,base_seed");

    const auto doc = io::sweep_json(summaries);
    REQUIRE(doc.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        for (int i = 0; i < 14; ++i) {
            const auto cells = split(rows[1 + k * 14 + static_cast<std::size_t>(i)]);
            REQUIRE(cells.size() == 10);
            CHECK(std::stoi(cells[3]) == i + 1);
            CHECK(std::stod(cells[5]) == summaries[k].mean_v[i]);
            CHECK(std::stod(cells[5]) == doc[k]["per_rank"][static_cast<std::size_t>(i)]["mean_V"].get<double>());
            CHECK(std::stod(cells[6]) == summaries[k].stderr_v[i]);
        }
    }
    CHECK(io::sweep_csv(summaries) == csv);
    CHECK(io::dump(io::sweep_json(summaries)) == io::dump(doc));
    CHECK(io::sweep_csv({}) == rows[0] + "\n");
}

TEST_CASE("race CSV and JSON") {
    const auto consensus = make_consensus(0.3, 14);
    io::RaceReport report;
    report.a = 0.3;
    report.b = 4.0;
    report.schedule = "0.35-growth";
    report.p = consensus.probs;
    RaceConfig config;
    config.track_take = 0.18;
    report.result = simulate_race(config, consensus, make_preference(4.0, 14),
                                  make_schedule(ScheduleKind::ExpGrowth, 0.35), 99, true);
    const auto rows = lines(io::race_csv(report));
    REQUIRE(rows.size() == 15);
    CHECK(rows[0] == "seed,horse,rank_by_p,p,V_final,odds");
    const auto doc = io::race_json(report);
    CHECK(doc["seed"].get<std::uint64_t>() == 99);
    for (int i = 0; i < 14; ++i) {
        const auto cells = split(rows[static_cast<std::size_t>(i) + 1]);
        CHECK(std::stod(cells[4]) == doc["final_fractions"][static_cast<std::size_t>(i)].get<double>());
        CHECK(std::stod(cells[5]) == doc["final_odds"][static_cast<std::size_t>(i)].get<double>());
    }
    CHECK(doc["trajectory"].size() == 21);
    CHECK(lines(io::trajectory_csv(report)).size() == 1 + 21 * 14);
}

TEST_CASE("fit and density outputs") {
    const auto schedule = make_schedule(ScheduleKind::ExpGrowth, 0.35);
    const std::vector<FitResult> fits = {fit_accumulation(schedule, 1), fit_accumulation(schedule, 3)};
    const auto rows = lines(io::fit_csv(fits));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "order,residual_sum,c0,c1,c2,c3");
    CHECK(std::count(rows[1].begin(), rows[1].end(), ',') == 5);
    CHECK(io::fit_json(fits)[1]["coefficients"].size() == 4);

    const auto density = uniform_density(10);
    const auto drows = lines(io::density_csv(density));
    REQUIRE(drows.size() == 12);
    CHECK(drows[0] == "k,P");
}

TEST_CASE("write_text") {
    const auto path = std::filesystem::temp_directory_path() / "parimutuel_test_write.txt";
    io::write_text(path, "x,y\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y");
    CHECK_THROWS_AS(io::write_text("/nonexistent-dir/out.csv", "x"), std::runtime_error);
}

TEST_CASE("series ingestion") {
    SUBCASE("round trip of a standard schedule") {
        const auto original = make_schedule(ScheduleKind::ExpDecay, 0.35);
        const auto path = scratch_file("decay.csv", io::schedule_csv(original));
        const auto loaded = io::ingest_series(path);
        for (int t = -20; t <= 0; ++t) CHECK(std::abs(loaded.cumulative(t) - original.cumulative(t)) < 1e-12);
        CHECK(loaded.label() == "parimutuel_test_decay");
    }
    SUBCASE("real-race style series") {
        const auto schedule = io::ingest_series(kData / "hk_race.csv");
        CHECK(schedule.pre_fraction() == doctest::Approx(0.3598));
        const auto linear = fit_accumulation(schedule, 1);
        const auto cubic = fit_accumulation(schedule, 3);
        CHECK(cubic.residual_sum <= linear.residual_sum);
        CHECK(linear.residual_sum < 0.1);
    }
    SUBCASE("rejections") {
        CHECK_THROWS_WITH_AS(io::ingest_series(kData / "bad_endpoint.csv"), doctest::Contains("F(0)"), ValidationError);
        CHECK_THROWS_WITH_AS(io::ingest_series(kData / "missing_minute.csv"), doctest::Contains("missing minute"),
                             ValidationError);
        CHECK_THROWS_AS(io::read_series_csv(scratch_file("hdr.csv", "minute,F\n0,1\n")), ValidationError);
        CHECK_THROWS_AS(io::read_series_csv(scratch_file("dup.csv", "t,F\n0,1\n0,1\n")), ValidationError);
        CHECK_THROWS_AS(io::read_series_csv(scratch_file("junk.csv", "t,F\n0,one\n")), ValidationError);
        CHECK_THROWS_AS(io::read_series_csv(kData / "no_such_file.csv"), ValidationError);
    }
}

TEST_CASE("config defaults") {
    const RunConfig c;
    CHECK(c.race.n_horses == 14);
    CHECK(c.race.total_units == 200000);
    CHECK(c.replications == 2000);
    CHECK(c.a_values == default_a_grid());
    CHECK(c.b_values.size() == 13);
    CHECK(c.schedules == std::vector<std::string>{"0.35-growth"});
    CHECK(c.output_path() == "parimutuel_sweep.csv");
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("config validation names the field") {
    RunConfig c;
    c.b_values = {-1.0};
    try {
        c.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "b");
    }

    c = RunConfig{};
    c.mode = RunMode::MasterEq;
    c.replications = 500;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.replications = 1000;
    c.q = 0.4;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = RunConfig{};
    c.schedules = {"nowhere.csv"};
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("does not exist"), ConfigError);
    c.schedules = {"linear"};
    c.pre_fraction = 0.2;
    CHECK(resolve_schedules(c).front() == make_schedule(ScheduleKind::Linear, 0.2));
}

TEST_CASE("config parsing helpers") {
    CHECK(parse_number("1/400", "b") == 0.0025);
    CHECK(parse_number(" 4 ", "b") == 4.0);
    CHECK_THROWS_AS(parse_number("1/0", "b"), ConfigError);
    CHECK_THROWS_AS(parse_number("four", "b"), ConfigError);
    CHECK(parse_number_list("1/400,1,400", "b") == std::vector<double>{0.0025, 1.0, 400.0});
    CHECK(parse_parallel("auto") == 0u);
    CHECK(parse_parallel("3") == 3u);
    CHECK_THROWS_AS(parse_parallel("0"), ConfigError);
    CHECK_THROWS_AS(parse_parallel("-2"), ConfigError);
}

TEST_CASE("config merge, precedence and round trip") {
    const auto from_file = load_config_file(kData / "sweep_small.json");
    CHECK(from_file.replications == 40);
    CHECK(from_file.b_values == std::vector<double>{0.0025, 4.0, 400.0});
    CHECK(from_file.race.total_units == 20000);

    // Later layers override earlier ones, mirroring flags over file.
    const auto layered = merge_config(from_file, {{"reps", 12}});
    CHECK(layered.replications == 12);
    CHECK(layered.seed == 7);

    try {
        merge_config(RunConfig{}, {{"replications", 5}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "replications");
    }
    CHECK_THROWS_AS(merge_config(RunConfig{}, {{"seed", -1}}), ConfigError);
    CHECK_THROWS_AS(merge_config(RunConfig{}, {{"mode", "race"}}), ConfigError);

    RunConfig custom = from_file;
    custom.parallel = 0;
    custom.format = OutputFormat::Json;
    custom.fit_orders = {3};
    custom.q = 0.7;
    CHECK(merge_config(RunConfig{}, config_to_json(custom)) == custom);
    CHECK(merge_config(RunConfig{}, config_to_json(RunConfig{})) == RunConfig{});
}
