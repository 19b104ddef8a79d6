#include "oflab/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

#include "oflab/harness/experiments.hpp"

namespace oflab::harness {

using nlohmann::json;

double ExperimentConfig::step_for(double eps) const {
    return dt_eps_ratio > 0.0 ? std::min(dt, dt_eps_ratio * eps) : dt;
}

namespace {

double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(where, "expected a finite number");
    return v;
}

std::vector<double> numbers_at(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], where + "/" + std::to_string(i)));
    return out;
}

std::uint64_t count_at(const json& j, const std::string& where, bool allow_zero) {
    if (!j.is_number_integer()) throw ConfigError(where, "expected an integer");
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        if (v == 0 && !allow_zero) throw ConfigError(where, "must be positive");
        return v;
    }
    const auto v = j.get<std::int64_t>();
    if (v < 0 || (v == 0 && !allow_zero)) throw ConfigError(where, allow_zero ? "must be non-negative" : "must be positive");
    return static_cast<std::uint64_t>(v);
}

bool same_shape(const json& given, const json& reference) {
    if (reference.is_number()) return given.is_number();
    if (reference.is_array()) return given.is_array();
    if (reference.is_string()) return given.is_string();
    if (reference.is_boolean()) return given.is_boolean();
    return given.type() == reference.type();
}

void check_params(const json& params, const json& defaults, const std::string& where) {
    if (!params.is_object()) throw ConfigError(where, "expected an object");
    for (const auto& [key, value] : params.items()) {
        if (!defaults.contains(key)) throw ConfigError(where + "/" + key, "unknown parameter");
        if (!same_shape(value, defaults[key])) {
            throw ConfigError(where + "/" + key, "expected " + std::string(defaults[key].type_name()));
        }
        if (value.is_number()) number_at(value, where + "/" + key);
        if (value.is_array()) numbers_at(value, where + "/" + key);
    }
}

}  // namespace

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
    static const std::set<std::string> known = {"experiment", "drift", "drift_file", "x0",   "eps_ladder", "T",
                                                "dt",         "dt_eps_ratio", "paths", "seed", "output_dir", "params"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw ConfigError("/" + key, "unknown field");
    }
    if (!j.contains("experiment") || !j["experiment"].is_string()) {
        throw ConfigError("/experiment", "required string field");
    }
    ExperimentConfig cfg = default_config(j["experiment"].get<std::string>());

    if (j.contains("drift") && j.contains("drift_file")) throw ConfigError("/drift_file", "give drift or drift_file, not both");
    if (j.contains("drift")) cfg.drift = drift_from_json(j["drift"], "/drift");
    if (j.contains("drift_file")) {
        if (!j["drift_file"].is_string()) throw ConfigError("/drift_file", "expected a path string");
        std::filesystem::path p = j["drift_file"].get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        try {
            cfg.drift = load_drift_file(p);
        } catch (const ConfigError& e) {
            throw ConfigError("/drift_file", p.string() + ": " + e.what());
        }
    }
    if (j.contains("x0")) cfg.x0 = numbers_at(j["x0"], "/x0");
    if (j.contains("eps_ladder")) cfg.eps_ladder = numbers_at(j["eps_ladder"], "/eps_ladder");
    if (j.contains("T")) cfg.horizon = number_at(j["T"], "/T");
    if (j.contains("dt")) cfg.dt = number_at(j["dt"], "/dt");
    if (j.contains("dt_eps_ratio")) cfg.dt_eps_ratio = number_at(j["dt_eps_ratio"], "/dt_eps_ratio");
    if (j.contains("paths")) cfg.paths = count_at(j["paths"], "/paths", false);
    if (j.contains("seed")) cfg.seed = count_at(j["seed"], "/seed", true);
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw ConfigError("/output_dir", "expected a path string");
        std::filesystem::path p = j["output_dir"].get<std::string>();
        cfg.output_dir = p.is_relative() ? base_dir / p : p;
    } else if (!base_dir.empty()) {
        cfg.output_dir = base_dir / cfg.output_dir;
    }
    if (j.contains("params")) {
        check_params(j["params"], cfg.params, "/params");
        for (const auto& [key, value] : j["params"].items()) cfg.params[key] = value;
    }
    validate_config(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_json_file(path), path.parent_path());
}

void validate_config(const ExperimentConfig& cfg) {
    const auto* info = find_experiment(cfg.experiment);
    if (!info) throw ConfigError("/experiment", "unknown experiment \"" + cfg.experiment + "\"");
    if (cfg.eps_ladder.empty()) throw ConfigError("/eps_ladder", "needs at least one value");
    for (std::size_t i = 0; i < cfg.eps_ladder.size(); ++i) {
        if (!(cfg.eps_ladder[i] > 0.0)) throw ConfigError("/eps_ladder/" + std::to_string(i), "must be positive");
        if (i > 0 && !(cfg.eps_ladder[i] < cfg.eps_ladder[i - 1])) {
            throw ConfigError("/eps_ladder/" + std::to_string(i), "ladder must be strictly decreasing");
        }
    }
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) throw ConfigError("/T", "must be positive and finite");
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("/dt", "must be positive and finite");
    if (cfg.dt > cfg.horizon) throw ConfigError("/dt", "step is longer than the horizon");
    if (cfg.dt_eps_ratio < 0.0) throw ConfigError("/dt_eps_ratio", "must be non-negative");
    if (cfg.paths == 0) throw ConfigError("/paths", "must be positive");
    const double steps = cfg.horizon / cfg.step_for(cfg.eps_ladder.back());
    if (steps > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
        throw ConfigError("/dt", "too many steps for the noise counter");
    }
    if (cfg.drift && !cfg.x0.empty() && static_cast<int>(cfg.x0.size()) != cfg.drift->n()) {
        throw ConfigError("/x0", "has " + std::to_string(cfg.x0.size()) + " entries but the drift has n = " +
                                     std::to_string(cfg.drift->n()));
    }
    check_params(cfg.params, info->defaults().params, "/params");
}

void apply_env_overrides(ExperimentConfig& cfg) {
    const char* s = std::getenv("OFLAB_SEED");
    if (!s || !*s) return;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (*end != '\0' || s[0] == '-') throw ConfigError("", "OFLAB_SEED must be a non-negative integer");
    cfg.seed = v;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    if (cfg.drift) j["drift"] = drift_to_json(*cfg.drift);
    j["x0"] = cfg.x0;
    j["eps_ladder"] = cfg.eps_ladder;
    j["T"] = cfg.horizon;
    j["dt"] = cfg.dt;
    j["dt_eps_ratio"] = cfg.dt_eps_ratio;
    j["paths"] = cfg.paths;
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir.string();
    j["params"] = cfg.params;
    return j;
}

double param_number(const ExperimentConfig& cfg, const std::string& key) {
    if (!cfg.params.contains(key)) throw ConfigError("/params/" + key, "missing parameter");
    return number_at(cfg.params[key], "/params/" + key);
}

std::vector<double> param_numbers(const ExperimentConfig& cfg, const std::string& key) {
    if (!cfg.params.contains(key)) throw ConfigError("/params/" + key, "missing parameter");
    return numbers_at(cfg.params[key], "/params/" + key);
}

}  // namespace oflab::harness
