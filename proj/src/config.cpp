#include "parimutuel/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "parimutuel/error.hpp"
#include "parimutuel/io.hpp"

namespace parimutuel {

namespace {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t");
    return std::string(text.substr(first, last - first + 1));
}

double json_number(const nlohmann::json& value, const std::string& field) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) return parse_number(value.get<std::string>(), field);
    throw ConfigError(field, "expected a number");
}

std::vector<double> json_number_list(const nlohmann::json& value, const std::string& field) {
    if (value.is_array()) {
        std::vector<double> out;
        for (const auto& item : value) out.push_back(json_number(item, field));
        return out;
    }
    if (value.is_string()) return parse_number_list(value.get<std::string>(), field);
    return {json_number(value, field)};
}

template <typename Int>
Int json_integer(const nlohmann::json& value, const std::string& field) {
    if (!value.is_number_integer()) throw ConfigError(field, "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
        if (value.is_number_unsigned()) return value.get<Int>();
        if (value.get<std::int64_t>() < 0) throw ConfigError(field, "must be nonnegative");
    }
    return value.get<Int>();
}

std::string json_string(const nlohmann::json& value, const std::string& field) {
    if (!value.is_string()) throw ConfigError(field, "expected a string");
    return value.get<std::string>();
}

}  // namespace

std::string_view to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Simulate: return "simulate";
        case RunMode::Sweep: return "sweep";
        case RunMode::MasterEq: return "master-eq";
        case RunMode::Fit: return "fit";
    }
    return "unknown";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

RunMode run_mode_from_string(std::string_view text) {
    if (text == "simulate") return RunMode::Simulate;
    if (text == "sweep") return RunMode::Sweep;
    if (text == "master-eq") return RunMode::MasterEq;
    if (text == "fit") return RunMode::Fit;
    throw ConfigError("mode", "unknown mode '" + std::string(text) + "' (simulate, sweep, master-eq, fit)");
}

OutputFormat output_format_from_string(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw ConfigError("format", "unknown format '" + std::string(text) + "' (csv, json)");
}

double parse_number(std::string_view text, std::string_view field) {
    const std::string body = trim(text);
    auto parse_plain = [&](const std::string& part) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != part.size()) {
            throw ConfigError(std::string(field), "cannot parse number '" + std::string(text) + "'");
        }
        return value;
    };
    const auto slash = body.find('/');
    if (slash == std::string::npos) return parse_plain(body);
    const double num = parse_plain(trim(std::string_view(body).substr(0, slash)));
    const double den = parse_plain(trim(std::string_view(body).substr(slash + 1)));
    if (den == 0.0) throw ConfigError(std::string(field), "zero denominator in '" + std::string(text) + "'");
    return num / den;
}

std::vector<double> parse_number_list(std::string_view text, std::string_view field) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_number(piece, field));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

unsigned parse_parallel(std::string_view text) {
    const std::string body = trim(text);
    if (body == "auto") return 0;
    try {
        std::size_t used = 0;
        const long value = std::stol(body, &used);
        if (used == body.size() && value >= 1) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
    }
    throw ConfigError("parallel", "expected 'auto' or a positive integer, got '" + body + "'");
}

void RunConfig::validate() const {
    if (a_values.empty()) throw ConfigError("a", "grid must be nonempty");
    for (double a : a_values) {
        if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("a", "values must be finite and >= 0");
    }
    if (b_values.empty()) throw ConfigError("b", "grid must be nonempty");
    for (double b : b_values) {
        if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("b", "values must be finite and >= 0");
    }
    if (!(pre_fraction > 0.0 && pre_fraction < 1.0)) throw ConfigError("pre_fraction", "must lie in (0, 1)");
    if (schedules.empty()) throw ConfigError("schedule", "at least one schedule required");
    if (replications < 1) throw ConfigError("reps", "must be >= 1");
    if (mode == RunMode::MasterEq && replications < 1000) {
        throw ConfigError("reps", "master-eq comparison needs at least 1000 replications");
    }
    race.validate();
    if (grid_size < 2) throw ConfigError("grid_size", "must be >= 2");
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("p", "must lie in (0, 1)");
    if (!(q >= 0.5 && q < 1.0)) throw ConfigError("q", "must lie in [0.5, 1)");
    if (fit_orders.empty()) throw ConfigError("fit_orders", "at least one order required");
    for (int order : fit_orders) {
        if (order != 1 && order != 3) throw ConfigError("fit_orders", "orders must be 1 or 3");
    }
    (void)resolve_schedules(*this);
}

std::filesystem::path RunConfig::output_path() const {
    if (!out.empty()) return out;
    return "parimutuel_" + std::string(to_string(mode)) + "." + std::string(to_string(format));
}

RunConfig merge_config(RunConfig base, const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config", "top level must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "mode") {
            base.mode = run_mode_from_string(json_string(value, key));
        } else if (key == "a") {
            base.a_values = json_number_list(value, key);
        } else if (key == "b") {
            base.b_values = json_number_list(value, key);
        } else if (key == "schedule") {
            if (value.is_string()) {
                base.schedules = {value.get<std::string>()};
            } else if (value.is_array()) {
                base.schedules.clear();
                for (const auto& item : value) base.schedules.push_back(json_string(item, key));
            } else {
                throw ConfigError(key, "expected a string or list of strings");
            }
        } else if (key == "pre_fraction") {
            base.pre_fraction = json_number(value, key);
        } else if (key == "reps") {
            base.replications = json_integer<int>(value, key);
        } else if (key == "seed") {
            base.seed = json_integer<std::uint64_t>(value, key);
        } else if (key == "out") {
            base.out = json_string(value, key);
        } else if (key == "format") {
            base.format = output_format_from_string(json_string(value, key));
        } else if (key == "parallel") {
            base.parallel = value.is_string() ? parse_parallel(value.get<std::string>())
                                              : parse_parallel(std::to_string(json_integer<std::int64_t>(value, key)));
        } else if (key == "n_horses") {
            base.race.n_horses = json_integer<int>(value, key);
        } else if (key == "m") {
            base.race.total_units = json_integer<std::int64_t>(value, key);
        } else if (key == "track_take") {
            base.race.track_take = json_number(value, key);
        } else if (key == "grid_size") {
            base.grid_size = json_integer<int>(value, key);
        } else if (key == "p") {
            base.p = json_number(value, key);
        } else if (key == "q") {
            base.q = json_number(value, key);
        } else if (key == "trajectory") {
            if (!value.is_boolean()) throw ConfigError(key, "expected true or false");
            base.trajectory = value.get<bool>();
        } else if (key == "fit_orders") {
            base.fit_orders.clear();
            if (!value.is_array()) throw ConfigError(key, "expected a list of integers");
            for (const auto& item : value) base.fit_orders.push_back(json_integer<int>(item, key));
        } else {
            throw ConfigError(key, "unknown configuration key");
        }
    }
    return base;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
    std::ifstream file(path);
    if (!file) throw ConfigError("config", "cannot read config file '" + path.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(file);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", "malformed JSON in '" + path.string() + "': " + e.what());
    }
    return merge_config(std::move(base), doc);
}

nlohmann::json config_to_json(const RunConfig& config) {
    nlohmann::json out;
    out["mode"] = to_string(config.mode);
    out["a"] = config.a_values;
    out["b"] = config.b_values;
    out["schedule"] = config.schedules;
    out["pre_fraction"] = config.pre_fraction;
    out["reps"] = config.replications;
    out["seed"] = config.seed;
    out["out"] = config.out;
    out["format"] = to_string(config.format);
    if (config.parallel == 0) {
        out["parallel"] = "auto";
    } else {
        out["parallel"] = config.parallel;
    }
    out["n_horses"] = config.race.n_horses;
    out["m"] = config.race.total_units;
    out["track_take"] = config.race.track_take;
    out["grid_size"] = config.grid_size;
    out["p"] = config.p;
    out["q"] = config.q;
    out["trajectory"] = config.trajectory;
    out["fit_orders"] = config.fit_orders;
    return out;
}

AccumulationSchedule resolve_schedule(std::string_view spec, double pre_fraction) {
    static const std::set<std::string_view> bare_kinds = {"growth", "exp-growth", "linear", "decay", "exp-decay"};
    if (bare_kinds.contains(spec)) return make_schedule(schedule_kind_from_string(spec), pre_fraction);

    const std::filesystem::path path{std::string(spec)};
    if (path.extension() == ".csv" || std::filesystem::exists(path)) {
        if (!std::filesystem::exists(path)) {
            throw ConfigError("schedule", "series file '" + path.string() + "' does not exist");
        }
        return io::ingest_series(path);
    }
    try {
        return schedule_from_name(spec);
    } catch (const ValidationError& e) {
        throw ConfigError("schedule", e.what());
    }
}

std::vector<AccumulationSchedule> resolve_schedules(const RunConfig& config) {
    std::vector<AccumulationSchedule> out;
    for (const auto& spec : config.schedules) {
        try {
            out.push_back(resolve_schedule(spec, config.pre_fraction));
        } catch (const ConfigError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ConfigError("schedule", e.what());
        }
    }
    return out;
}

ExperimentPlan make_plan(const RunConfig& config) {
    ExperimentPlan plan;
    plan.a_values = config.a_values;
    plan.b_values = config.b_values;
    plan.schedules = resolve_schedules(config);
    plan.replications = config.replications;
    plan.base_seed = config.seed;
    plan.config = config.race;
    return plan;
}

}  // namespace parimutuel
