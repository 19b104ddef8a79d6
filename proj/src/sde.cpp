#include "oflab/sde.hpp"

#include <algorithm>
#include <stdexcept>

namespace oflab {

void validate(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(cfg.horizon >= cfg.dt)) throw std::invalid_argument("horizon must be at least dt");
    if (!(cfg.eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
    if (cfg.paths == 0) throw std::invalid_argument("paths must be at least 1");
    if (cfg.x0.size() != static_cast<std::size_t>(cfg.spec.n())) {
        throw std::invalid_argument("x0 length does not match the drift spec");
    }
    for (double v : cfg.x0) {
        if (!std::isfinite(v)) throw std::invalid_argument("x0 has a non-finite entry");
    }
}

TimeGrid make_grid(double horizon, double dt) {
    if (!(dt > 0.0) || !(horizon > 0.0)) throw std::invalid_argument("horizon and dt must be positive");
    const auto steps = static_cast<std::uint64_t>(std::max(1.0, std::round(horizon / dt)));
    return {steps, horizon / static_cast<double>(steps)};
}

Trajectory simulate_X(const SimConfig& cfg, std::uint64_t path, std::uint64_t stride) {
    validate(cfg);
    if (stride == 0) throw std::invalid_argument("stride must be positive");
    const auto grid = make_grid(cfg.horizon, cfg.dt);
    Trajectory traj;
    traj.n = cfg.spec.n();
    traj.seed = cfg.seed;
    traj.path_index = path;
    simulate_path(
        cfg, path,
        [&](std::uint64_t k, double t, std::span<const double> x, std::span<const int>) {
            if (k % stride == 0 || k == grid.steps) traj.push(t, x);
        },
        cfg.record_noise ? &traj.increments : nullptr);
    return traj;
}

ScalarPath simulate_Z2(double b_minus, double b_plus, double z0, double eps, double horizon, double dt,
                       std::uint64_t seed, std::uint64_t path) {
    if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
    ScalarPath out;
    simulate_gap_path({b_minus, b_plus, z0, eps, horizon, dt, seed}, path, [&](std::uint64_t, double t, double z) {
        out.times.push_back(t);
        out.values.push_back(z);
    });
    return out;
}

Trajectory reorder(const Trajectory& traj) {
    Trajectory out = traj;
    for (std::size_t k = 0; k < out.times.size(); ++k) {
        auto row = out.state(k);
        std::sort(row.begin(), row.end());
    }
    return out;
}

double OccupationStats::fraction(const Permutation& sigma) const {
    auto it = zeta.find(sigma);
    if (it == zeta.end() || total_time <= 0.0) return 0.0;
    return it->second / total_time;
}

OccupationAccumulator::OccupationAccumulator(int n) : n_(n), counts_(static_cast<std::size_t>(factorial(n)), 0.0) {
    if (n > 9) throw std::invalid_argument("occupation accounting is limited to n <= 9");
}

void OccupationAccumulator::merge(const OccupationAccumulator& other) {
    if (other.n_ != n_) throw std::invalid_argument("merging occupation accumulators of different sizes");
    for (std::size_t r = 0; r < counts_.size(); ++r) counts_[r] += other.counts_[r];
    total_ += other.total_;
}

OccupationStats OccupationAccumulator::stats() const {
    OccupationStats s;
    s.total_time = total_;
    for (std::size_t r = 0; r < counts_.size(); ++r) {
        s.zeta.emplace(Permutation::unrank(n_, r), counts_[r]);
    }
    return s;
}

OccupationStats occupation_times(const Trajectory& traj) {
    OccupationAccumulator acc(traj.n);
    std::vector<int> order(static_cast<std::size_t>(traj.n));
    std::iota(order.begin(), order.end(), 1);
    for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
        update_order(traj.state(k), order);
        acc.add(order, traj.times[k + 1] - traj.times[k]);
    }
    return acc.stats();
}

double coincidence_fraction(const Trajectory& traj, double delta) {
    double hit = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
        const double h = traj.times[k + 1] - traj.times[k];
        total += h;
        if (in_coincidence_set(traj.state(k), delta)) hit += h;
    }
    return total > 0.0 ? hit / total : 0.0;
}

std::string occupation_csv(const OccupationStats& stats) {
    std::string out = "sigma,time,fraction\n";
    for (const auto& [sigma, t] : stats.zeta) {
        out += sigma.to_string() + ',' + format_number(t) + ',' + format_number(stats.fraction(sigma)) + '\n';
    }
    return out;
}

}  // namespace oflab
