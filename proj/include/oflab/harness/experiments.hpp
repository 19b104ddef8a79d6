#pragma once

#include <string>
#include <vector>

#include "oflab/drift.hpp"
#include "oflab/harness/config.hpp"
#include "oflab/harness/report.hpp"

namespace oflab::harness {

using ExperimentFn = Report (*)(const ExperimentConfig&);

struct ExperimentInfo {
    std::string name;
    std::string summary;
    ExperimentFn run;
    ExperimentConfig (*defaults)();
};

const std::vector<ExperimentInfo>& experiments();
const ExperimentInfo* find_experiment(const std::string& name);

/// Throws ConfigError for unknown names.
ExperimentConfig default_config(const std::string& name);

/// Validates the config, runs the experiment and fills in the report's
/// name and config echo. Nothing is written to disk.
Report run(const ExperimentConfig& cfg);

/// Three-particle family: b(123) = lambda and b(132) = eta, both indexed
/// by particle; every other ordering gives rank velocities (1, 0, -1).
DriftSpec counterexample_drift(const std::vector<double>& lambda, const std::vector<double>& eta);

/// Limit fraction of time in ordering (123) while particle 1 is below the
/// other two: (eta_3 - eta_2) / (lambda_2 - lambda_3 + eta_3 - eta_2).
double counterexample_rho(const std::vector<double>& lambda, const std::vector<double>& eta);

Report run_two_particle_selection(const ExperimentConfig& cfg);
Report run_two_particle_cluster(const ExperimentConfig& cfg);
Report run_arcsine(const ExperimentConfig& cfg);
Report run_limit_path_z(const ExperimentConfig& cfg);
Report run_hitting_prob(const ExperimentConfig& cfg);
Report run_laplace(const ExperimentConfig& cfg);
Report run_coincidence(const ExperimentConfig& cfg);
Report run_rank_sticky(const ExperimentConfig& cfg);
Report run_ordering_uniformity(const ExperimentConfig& cfg);
Report run_aggregation(const ExperimentConfig& cfg);
Report run_ergodic_velocity(const ExperimentConfig& cfg);
Report run_counterexample_3p(const ExperimentConfig& cfg);

}  // namespace oflab::harness
