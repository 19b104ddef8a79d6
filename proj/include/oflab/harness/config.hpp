#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "oflab/drift.hpp"
#include "oflab/harness/drift_io.hpp"

namespace oflab::harness {

struct ExperimentConfig {
    std::string experiment;
    std::optional<DriftSpec> drift;
    std::vector<double> x0;
    std::vector<double> eps_ladder;
    double horizon = 1.0;
    double dt = 1e-3;
    /// When positive, each ladder rung uses min(dt, dt_eps_ratio * eps).
    double dt_eps_ratio = 0.0;
    std::uint64_t paths = 1;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir;
    nlohmann::json params = nlohmann::json::object();

    double step_for(double eps) const;
};

/// Experiment defaults with the fields present in `j` laid over them.
/// Relative drift_file / output_dir paths resolve against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks invariants shared by all experiments (ladder order, positive
/// steps, parameter names and types against the experiment's defaults).
void validate_config(const ExperimentConfig& cfg);

/// Applies OFLAB_SEED when set.
void apply_env_overrides(ExperimentConfig& cfg);

/// Config as JSON, for the report echo.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Typed accessors for cfg.params.
double param_number(const ExperimentConfig& cfg, const std::string& key);
std::vector<double> param_numbers(const ExperimentConfig& cfg, const std::string& key);

}  // namespace oflab::harness
