#include "oflab/harness/experiments.hpp"

#include <stdexcept>

namespace oflab::harness {

using nlohmann::json;

namespace {

ExperimentConfig base(std::string name, std::vector<double> ladder, double horizon, double dt, std::uint64_t paths) {
    ExperimentConfig c;
    c.experiment = std::move(name);
    c.eps_ladder = std::move(ladder);
    c.horizon = horizon;
    c.dt = dt;
    c.paths = paths;
    c.seed = 1;
    c.output_dir = "out/" + c.experiment;
    return c;
}

ExperimentConfig selection_defaults() {
    auto c = base("two-particle-selection", {1e-3, 1e-4}, 0.5, 1e-5, 10000);
    c.drift = two_particle({-0.5, 0.5}, {1.5, -1.5});
    c.x0 = {0.0, 0.0};
    c.params = {{"tolerance", 0.03}, {"refined_dt_ratio", 0.01}, {"refined_paths", 10000}};
    return c;
}

ExperimentConfig cluster_defaults() {
    auto c = base("two-particle-cluster", {1e-3, 1e-4}, 1.0, 1e-3, 200);
    c.dt_eps_ratio = 0.1;
    c.drift = two_particle({2.0, -1.0}, {-3.0, 1.0});
    c.x0 = {0.0, 0.0};
    c.params = {{"velocity_tolerance", 0.02}};
    return c;
}

ExperimentConfig arcsine_defaults() {
    auto c = base("arcsine", {1.0}, 1.0, 1e-4, 10000);
    c.drift = two_particle({0.0, 0.0}, {0.0, 0.0});
    c.x0 = {0.0, 0.0};
    c.params = {{"ks_bound", 0.02}};
    return c;
}

ExperimentConfig limit_path_defaults() {
    auto c = base("limit-path-z", {1e-2, 1e-3, 1e-4}, 2.0, 1e-4, 200);
    c.drift = two_particle({-1.0, 1.0}, {-0.5, 0.5});
    c.params = {{"z0", 1.0}};
    return c;
}

ExperimentConfig hitting_defaults() {
    auto c = base("hitting-prob", {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}, 10.0, 1e-6, 2000);
    c.params = {{"c_minus", -2.0},          {"c_plus", 1.0},           {"delta_exponent", 0.75},
                {"quadrature_rel_tol", 1e-8}, {"limit_tolerance", 1e-3}, {"mc_eps", 1e-2}};
    return c;
}

ExperimentConfig laplace_defaults() {
    auto c = base("laplace", {1e-2}, 50.0, 1e-4, 10000);
    c.params = {{"z0", 1.0},        {"b_plus", -1.0},        {"alpha", 1.0},
                {"tolerance", 0.01}, {"identity_b_plus", 1.0}, {"identity_rel_tol", 1e-13}};
    return c;
}

ExperimentConfig coincidence_defaults() {
    auto c = base("coincidence", {1.0}, 1.0, 1e-4, 200);
    c.drift = two_particle({0.0, 0.0}, {0.0, 0.0});
    c.x0 = {0.0, 0.0};
    c.params = {{"deltas", {1e-2, 1e-3, 1e-4}}, {"last_bound", 0.01}};
    return c;
}

ExperimentConfig rank_sticky_defaults() {
    auto c = base("rank-sticky", {1e-2, 1e-3, 1e-4}, 1.0, 1e-3, 1000);
    c.dt_eps_ratio = 0.1;
    c.drift = DriftSpec::rank_based({2.0, 1.0, -1.0, -2.0});
    c.x0 = {0.0, 0.0, 0.0, 0.0};
    c.params = {{"proportionality_factor", 3.0}};
    return c;
}

ExperimentConfig uniformity_defaults() {
    auto c = base("ordering-uniformity", {1e-3}, 0.2, 2e-5, 6000);
    c.drift = DriftSpec::rank_based({-1.0, 0.0, 1.0});
    c.x0 = {0.0, 0.0, 0.0};
    c.params = {{"min_pvalue", 1e-3}};
    return c;
}

ExperimentConfig aggregation_defaults() {
    auto c = base("aggregation", {1e-3}, 1.0, 1e-4, 1000);
    c.drift = DriftSpec::rank_based({1.0, 0.0, -1.0});
    c.x0 = {0.0, 0.0, 0.0};
    return c;
}

ExperimentConfig ergodic_defaults() {
    auto c = base("ergodic-velocity", {1e-3}, 1e4, 1e-3, 100);
    c.drift = DriftSpec::rank_based({3.0, 1.0, -1.0});
    c.x0 = {0.0, 0.0, 0.0};
    c.params = {{"burn_in", 0.1},          {"batches", 20},         {"velocity_tolerance", 0.05},
                {"spread_bound", 0.05},    {"direct_horizon", 1.0}, {"direct_dt", 1e-4}};
    return c;
}

ExperimentConfig counterexample_defaults() {
    auto c = base("counterexample-3p", {1e-2, 1e-3, 1e-4}, 1.0, 1e-3, 200);
    c.dt_eps_ratio = 0.1;
    c.x0 = {0.0, 0.0, 0.0};
    c.params = {{"lambda", {-0.5, 1.0, -1.0}}, {"eta", {2.0, -1.0, 1.0}}, {"rho_tolerance", 0.05}};
    return c;
}

}  // namespace

const std::vector<ExperimentInfo>& experiments() {
    static const std::vector<ExperimentInfo> list = {
        {"two-particle-selection", "random selection between two diverging paths", run_two_particle_selection,
         selection_defaults},
        {"two-particle-cluster", "velocity and width of a converging two-particle cluster", run_two_particle_cluster,
         cluster_defaults},
        {"arcsine", "occupation time of the driftless pair against the Arcsine law", run_arcsine, arcsine_defaults},
        {"limit-path-z", "distance of the gap process to its zero-noise limit", run_limit_path_z,
         limit_path_defaults},
        {"hitting-prob", "exit probability from a small interval: quadrature, closed form, Monte Carlo",
         run_hitting_prob, hitting_defaults},
        {"laplace", "Laplace transform of the gap hitting time", run_laplace, laplace_defaults},
        {"coincidence", "time spent near the coincidence set", run_coincidence, coincidence_defaults},
        {"rank-sticky", "rank-based system against sticky particle dynamics", run_rank_sticky,
         rank_sticky_defaults},
        {"ordering-uniformity", "final orderings of a fully diverging rank-based system", run_ordering_uniformity,
         uniformity_defaults},
        {"aggregation", "cluster width under the stability condition", run_aggregation, aggregation_defaults},
        {"ergodic-velocity", "cluster velocity from the stationary cone measure", run_ergodic_velocity,
         ergodic_defaults},
        {"counterexample-3p", "three particles aggregating without the stability condition",
         run_counterexample_3p, counterexample_defaults},
    };
    return list;
}

const ExperimentInfo* find_experiment(const std::string& name) {
    for (const auto& e : experiments()) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

ExperimentConfig default_config(const std::string& name) {
    const auto* info = find_experiment(name);
    if (!info) throw ConfigError("/experiment", "unknown experiment \"" + name + "\" (see list-experiments)");
    return info->defaults();
}

Report run(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const auto* info = find_experiment(cfg.experiment);
    Report report = info->run(cfg);
    report.experiment = cfg.experiment;
    report.config = config_to_json(cfg);
    return report;
}

DriftSpec counterexample_drift(const std::vector<double>& lambda, const std::vector<double>& eta) {
    if (lambda.size() != 3 || eta.size() != 3) throw std::invalid_argument("lambda and eta need three entries");
    std::vector<std::vector<double>> rows;
    for (const auto& sigma : all_permutations(3)) {
        if (sigma == Permutation({1, 2, 3})) {
            rows.push_back(lambda);
        } else if (sigma == Permutation({1, 3, 2})) {
            rows.push_back(eta);
        } else {
            std::vector<double> v(3);
            const double by_rank[3] = {1.0, 0.0, -1.0};
            for (int k = 1; k <= 3; ++k) v[static_cast<std::size_t>(sigma(k) - 1)] = by_rank[k - 1];
            rows.push_back(v);
        }
    }
    return DriftSpec::general(3, std::move(rows));
}

double counterexample_rho(const std::vector<double>& lambda, const std::vector<double>& eta) {
    const double up = eta[2] - eta[1];
    const double down = lambda[1] - lambda[2] + up;
    if (!(up > 0.0) || !(lambda[1] - lambda[2] > 0.0)) {
        throw std::invalid_argument("rho needs lambda_2 > lambda_3 and eta_3 > eta_2");
    }
    return up / down;
}

}  // namespace oflab::harness
