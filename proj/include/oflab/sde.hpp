#pragma once

// Euler-Maruyama engine for dX = b(Sigma X) dt + sqrt(2 eps) dW and the
// scalar two-particle gap process dZ = l(Z) dt + 2 sqrt(eps) dB.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <type_traits>
#include <vector>

#include "oflab/drift.hpp"
#include "oflab/ordering.hpp"
#include "oflab/rng.hpp"
#include "oflab/trajectory.hpp"

namespace oflab {

struct SimConfig {
    DriftSpec spec;
    std::vector<double> x0;
    double eps = 0.0;
    double horizon = 1.0;
    double dt = 1e-3;
    std::uint64_t seed = 0;
    std::uint64_t paths = 1;
    bool record_noise = false;
};

/// Throws std::invalid_argument on dt <= 0, horizon < dt, eps < 0,
/// paths == 0, a size mismatch or non-finite x0.
void validate(const SimConfig& cfg);

/// The horizon is split into round(horizon / dt) equal steps; `dt` is the
/// effective step horizon / steps.
struct TimeGrid {
    std::uint64_t steps = 0;
    double dt = 0.0;
    double time(std::uint64_t k) const { return static_cast<double>(k) * dt; }
};

TimeGrid make_grid(double horizon, double dt);

namespace detail {

template <class F, class... Args>
bool call_observer(F& f, Args&&... args) {
    if constexpr (std::is_same_v<std::invoke_result_t<F&, Args...>, bool>) {
        return f(std::forward<Args>(args)...);
    } else {
        f(std::forward<Args>(args)...);
        return true;
    }
}

}  // namespace detail

/// Streams one path. `obs(k, t, x, order)` sees the state at every grid
/// point k = 0..steps together with the word of Sigma(x); returning false
/// stops the path early. `noise`, if non-null, receives each step's normals.
template <class Observer>
void simulate_path(const SimConfig& cfg, std::uint64_t path, Observer&& obs,
                   std::vector<double>* noise = nullptr) {
    const auto n = cfg.x0.size();
    const auto grid = make_grid(cfg.horizon, cfg.dt);
    const double scale = std::sqrt(2.0 * cfg.eps * grid.dt);
    const NoiseStream stream(cfg.seed, path);

    std::vector<double> x = cfg.x0;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    update_order(x, order);
    std::vector<double> b(n);
    std::vector<double> g(n);

    for (std::uint64_t k = 0;; ++k) {
        const std::span<const double> xs(x);
        const std::span<const int> os(order);
        if (!detail::call_observer(obs, k, grid.time(k), xs, os)) return;
        if (k == grid.steps) return;
        cfg.spec.velocity(order, b);
        if (cfg.eps > 0.0) {
            stream.fill(k, g);
            if (noise) noise->insert(noise->end(), g.begin(), g.end());
            for (std::size_t i = 0; i < n; ++i) x[i] += b[i] * grid.dt + scale * g[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) x[i] += b[i] * grid.dt;
        }
        update_order(x, order);
    }
}

/// Full trajectory of one path, keeping every `stride`-th grid point (the
/// final point is always kept).
Trajectory simulate_X(const SimConfig& cfg, std::uint64_t path = 0, std::uint64_t stride = 1);

struct GapConfig {
    double b_minus = 0.0;  // drift for z <= 0
    double b_plus = 0.0;   // drift for z > 0
    double z0 = 0.0;
    double eps = 0.0;
    double horizon = 1.0;
    double dt = 1e-3;
    std::uint64_t seed = 0;
};

/// Streams one gap path; `obs(k, t, z)` may return false to stop.
template <class Observer>
void simulate_gap_path(const GapConfig& cfg, std::uint64_t path, Observer&& obs) {
    const auto grid = make_grid(cfg.horizon, cfg.dt);
    const double scale = 2.0 * std::sqrt(cfg.eps * grid.dt);
    const NoiseStream stream(cfg.seed, path);
    double z = cfg.z0;
    double g[2];
    for (std::uint64_t k = 0;; ++k) {
        if (!detail::call_observer(obs, k, grid.time(k), z)) return;
        if (k == grid.steps) return;
        const double drift = z <= 0.0 ? cfg.b_minus : cfg.b_plus;
        stream.fill(k, std::span<double>(g, 1));
        z += drift * grid.dt + scale * g[0];
    }
}

ScalarPath simulate_Z2(double b_minus, double b_plus, double z0, double eps, double horizon, double dt,
                       std::uint64_t seed, std::uint64_t path = 0);

/// Coordinates sorted increasingly at every grid point.
Trajectory reorder(const Trajectory& traj);

struct OccupationStats {
    std::map<Permutation, double> zeta;
    double total_time = 0.0;

    double fraction(const Permutation& sigma) const;
};

/// Streaming left-endpoint occupation accumulator, indexed by the
/// lexicographic rank of the ordering.
class OccupationAccumulator {
public:
    explicit OccupationAccumulator(int n);

    void add(std::span<const int> word, double dt) {
        counts_[static_cast<std::size_t>(lexicographic_rank(word))] += dt;
        total_ += dt;
    }
    void merge(const OccupationAccumulator& other);

    int n() const { return n_; }
    double total() const { return total_; }
    double time_of(const Permutation& sigma) const { return counts_[static_cast<std::size_t>(sigma.rank())]; }
    std::span<const double> by_rank() const { return counts_; }

    OccupationStats stats() const;

private:
    int n_;
    std::vector<double> counts_;
    double total_ = 0.0;
};

OccupationStats occupation_times(const Trajectory& traj);

/// Fraction of grid time (left-endpoint rule) during which some pair of
/// coordinates is within `delta`.
double coincidence_fraction(const Trajectory& traj, double delta);

/// CSV "sigma,time,fraction".
std::string occupation_csv(const OccupationStats& stats);

}  // namespace oflab
