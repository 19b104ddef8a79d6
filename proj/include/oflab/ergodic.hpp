#pragma once

// Long-run behaviour of the centered unit-noise process
// dZ = b^Pi(Sigma Z) dt + sqrt(2) Pi dW and the cluster velocity it yields.

#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "oflab/drift.hpp"
#include "oflab/rng.hpp"
#include "oflab/sde.hpp"
#include "oflab/trajectory.hpp"

namespace oflab {

/// Streams the projected process from z = 0. Every state is re-centered
/// after the step. `obs(k, t, z, order)` may return false to stop.
template <class Observer>
void simulate_projected_path(const DriftSpec& spec, double horizon, double dt, std::uint64_t seed,
                             std::uint64_t path, Observer&& obs) {
    const auto n = static_cast<std::size_t>(spec.n());
    const auto grid = make_grid(horizon, dt);
    const double scale = std::sqrt(2.0 * grid.dt);
    const NoiseStream stream(seed, path);
    std::vector<double> z(n, 0.0);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    std::vector<double> b(n);
    std::vector<double> g(n);
    for (std::uint64_t k = 0;; ++k) {
        const std::span<const double> zs(z);
        const std::span<const int> os(order);
        if (!detail::call_observer(obs, k, grid.time(k), zs, os)) return;
        if (k == grid.steps) return;
        spec.velocity(order, b);
        stream.fill(k, g);
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            z[i] += b[i] * grid.dt + scale * g[i];
            mean += z[i];
        }
        mean /= static_cast<double>(n);
        for (auto& v : z) v -= mean;
        update_order(z, order);
    }
}

/// Recorded projected trajectory (every `stride`-th grid point).
Trajectory simulate_projected(const DriftSpec& spec, double horizon, double dt, std::uint64_t seed,
                              std::uint64_t stride = 1);

struct EmpiricalConeMeasure {
    int n = 0;
    std::map<Permutation, double> weights;
    double horizon = 0.0;
    double burn_in = 0.0;
    /// Per-batch cone weights, for standard errors; may be empty.
    std::vector<std::map<Permutation, double>> batches;

    double weight(const Permutation& sigma) const;
};

/// Streaming cone-time accumulator over a grid of `steps` steps: the first
/// burn_in_fraction of the steps is discarded, the rest is split into
/// `batches` contiguous batches.
class ConeAccumulator {
public:
    ConeAccumulator(int n, std::uint64_t steps, double dt, double burn_in_fraction, int batches = 20);

    /// Records the interval [t_k, t_{k+1}) spent in ordering `word`.
    void add(std::uint64_t k, std::span<const int> word);

    EmpiricalConeMeasure result() const;

private:
    int n_;
    std::uint64_t steps_;
    std::uint64_t burn_steps_;
    double dt_;
    int batch_count_;
    std::vector<std::vector<double>> batch_time_;
};

EmpiricalConeMeasure estimate_cone_measure(const Trajectory& traj, double burn_in_fraction, int batches = 20);

/// Runs the projected process and accumulates its cone measure without
/// storing the path.
EmpiricalConeMeasure run_cone_measure(const DriftSpec& spec, double horizon, double dt, std::uint64_t seed,
                                      double burn_in_fraction = 0.1, int batches = 20);

struct VelocityEstimate {
    std::vector<double> v_by_index;
    double v = 0.0;
    double spread = 0.0;
    double standard_error = 0.0;
};

/// v_i = sum_sigma b_i(sigma) mu(sigma); the standard error comes from the
/// batch means of v.
VelocityEstimate estimate_velocity(const DriftSpec& spec, const EmpiricalConeMeasure& mu);

/// CSV "sigma,weight".
std::string cone_measure_csv(const EmpiricalConeMeasure& mu);

struct ScaleChangeRow {
    std::string statistic;
    double direct = 0.0;
    double rescaled = 0.0;
    double z = 0.0;
    bool flagged = false;
};

struct ScaleChangeReport {
    std::vector<ScaleChangeRow> rows;
    double max_abs_z = 0.0;
    bool any_flagged = false;
};

/// Compares the law of X^eps(T) simulated directly with eps X^1(T / eps)
/// simulated at unit noise from x0 / eps with step dt / eps. The two
/// ensembles use independent seeds; rows with |z| > 4 are flagged.
ScaleChangeReport scale_change_check(const DriftSpec& spec, std::span<const double> x0, double eps, double horizon,
                                     double dt, std::uint64_t paths, std::uint64_t seed_direct,
                                     std::uint64_t seed_rescaled);

}  // namespace oflab
