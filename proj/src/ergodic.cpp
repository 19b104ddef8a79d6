#include "oflab/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oflab/parallel.hpp"
#include "oflab/stats.hpp"

namespace oflab {

Trajectory simulate_projected(const DriftSpec& spec, double horizon, double dt, std::uint64_t seed,
                              std::uint64_t stride) {
    if (stride == 0) throw std::invalid_argument("stride must be positive");
    const auto grid = make_grid(horizon, dt);
    Trajectory traj;
    traj.n = spec.n();
    traj.seed = seed;
    simulate_projected_path(spec, horizon, dt, seed, 0,
                            [&](std::uint64_t k, double t, std::span<const double> z, std::span<const int>) {
                                if (k % stride == 0 || k == grid.steps) traj.push(t, z);
                            });
    return traj;
}

double EmpiricalConeMeasure::weight(const Permutation& sigma) const {
    auto it = weights.find(sigma);
    return it == weights.end() ? 0.0 : it->second;
}

ConeAccumulator::ConeAccumulator(int n, std::uint64_t steps, double dt, double burn_in_fraction, int batches)
    : n_(n), steps_(steps), dt_(dt), batch_count_(batches) {
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
        throw std::invalid_argument("burn-in fraction must lie in [0, 1)");
    }
    if (batches < 1) throw std::invalid_argument("need at least one batch");
    burn_steps_ = static_cast<std::uint64_t>(std::floor(burn_in_fraction * static_cast<double>(steps)));
    if (burn_steps_ >= steps_) throw std::invalid_argument("burn-in leaves no samples");
    batch_time_.assign(static_cast<std::size_t>(batches), std::vector<double>(factorial(n), 0.0));
}

void ConeAccumulator::add(std::uint64_t k, std::span<const int> word) {
    if (k < burn_steps_ || k >= steps_) return;
    const auto kept = steps_ - burn_steps_;
    const auto b = static_cast<std::size_t>((k - burn_steps_) * static_cast<std::uint64_t>(batch_count_) / kept);
    batch_time_[b][static_cast<std::size_t>(lexicographic_rank(word))] += dt_;
}

EmpiricalConeMeasure ConeAccumulator::result() const {
    EmpiricalConeMeasure mu;
    mu.n = n_;
    mu.horizon = static_cast<double>(steps_) * dt_;
    mu.burn_in = static_cast<double>(burn_steps_) * dt_;
    const auto cones = batch_time_.front().size();
    std::vector<double> total(cones, 0.0);
    double grand = 0.0;
    for (const auto& bt : batch_time_) {
        double bsum = 0.0;
        for (double v : bt) bsum += v;
        std::map<Permutation, double> w;
        for (std::size_t r = 0; r < cones; ++r) {
            total[r] += bt[r];
            if (bsum > 0.0) w.emplace(Permutation::unrank(n_, r), bt[r] / bsum);
        }
        grand += bsum;
        if (!w.empty()) mu.batches.push_back(std::move(w));
    }
    for (std::size_t r = 0; r < cones; ++r) {
        mu.weights.emplace(Permutation::unrank(n_, r), grand > 0.0 ? total[r] / grand : 0.0);
    }
    return mu;
}

EmpiricalConeMeasure estimate_cone_measure(const Trajectory& traj, double burn_in_fraction, int batches) {
    if (traj.times.size() < 2) throw std::invalid_argument("trajectory too short for a cone measure");
    const auto steps = traj.times.size() - 1;
    const double dt = (traj.times.back() - traj.times.front()) / static_cast<double>(steps);
    ConeAccumulator acc(traj.n, steps, dt, burn_in_fraction, batches);
    std::vector<int> order(static_cast<std::size_t>(traj.n));
    std::iota(order.begin(), order.end(), 1);
    for (std::size_t k = 0; k < steps; ++k) {
        update_order(traj.state(k), order);
        acc.add(k, order);
    }
    return acc.result();
}

EmpiricalConeMeasure run_cone_measure(const DriftSpec& spec, double horizon, double dt, std::uint64_t seed,
                                      double burn_in_fraction, int batches) {
    const auto grid = make_grid(horizon, dt);
    ConeAccumulator acc(spec.n(), grid.steps, grid.dt, burn_in_fraction, batches);
    simulate_projected_path(spec, horizon, dt, seed, 0,
                            [&](std::uint64_t k, double, std::span<const double>, std::span<const int> order) {
                                acc.add(k, order);
                            });
    return acc.result();
}

namespace {

std::vector<double> velocity_from_weights(const DriftSpec& spec, const std::map<Permutation, double>& w) {
    std::vector<double> v(static_cast<std::size_t>(spec.n()), 0.0);
    std::vector<double> b(v.size());
    for (const auto& [sigma, weight] : w) {
        if (weight == 0.0) continue;
        spec.velocity(sigma.word(), b);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += weight * b[i];
    }
    return v;
}

double mean_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

VelocityEstimate estimate_velocity(const DriftSpec& spec, const EmpiricalConeMeasure& mu) {
    if (mu.n != spec.n()) throw std::invalid_argument("cone measure and drift spec differ in n");
    if (mu.weights.size() != factorial(spec.n())) throw std::invalid_argument("cone measure must cover S_n");
    VelocityEstimate est;
    est.v_by_index = velocity_from_weights(spec, mu.weights);
    est.v = mean_of(est.v_by_index);
    const auto [lo, hi] = std::minmax_element(est.v_by_index.begin(), est.v_by_index.end());
    est.spread = *hi - *lo;
    if (mu.batches.size() > 1) {
        std::vector<double> per_batch;
        for (const auto& w : mu.batches) per_batch.push_back(mean_of(velocity_from_weights(spec, w)));
        est.standard_error = summarize(per_batch).std_error;
    }
    return est;
}

std::string cone_measure_csv(const EmpiricalConeMeasure& mu) {
    std::string out = "sigma,weight\n";
    for (const auto& [sigma, w] : mu.weights) out += sigma.to_string() + ',' + format_number(w) + '\n';
    return out;
}

namespace {

struct EndpointSample {
    std::vector<double> x;
    std::uint64_t cone = 0;
};

std::vector<EndpointSample> endpoints(const SimConfig& cfg, double factor) {
    const auto last = make_grid(cfg.horizon, cfg.dt).steps;
    return map_paths(cfg.paths, [&](std::uint64_t p) {
        EndpointSample s;
        simulate_path(cfg, p, [&](std::uint64_t k, double, std::span<const double> x, std::span<const int> order) {
            if (k == last) {
                s.x.assign(x.begin(), x.end());
                for (auto& v : s.x) v *= factor;
                s.cone = lexicographic_rank(order);
            }
        });
        return s;
    });
}

double z_score(double a, double se_a, double b, double se_b) {
    const double se = std::sqrt(se_a * se_a + se_b * se_b);
    if (se == 0.0) return a == b ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), a - b);
    return (a - b) / se;
}

}  // namespace

ScaleChangeReport scale_change_check(const DriftSpec& spec, std::span<const double> x0, double eps, double horizon,
                                     double dt, std::uint64_t paths, std::uint64_t seed_direct,
                                     std::uint64_t seed_rescaled) {
    if (!(eps > 0.0)) throw std::invalid_argument("scale change check needs eps > 0");
    SimConfig direct{spec, {x0.begin(), x0.end()}, eps, horizon, dt, seed_direct, paths, false};
    validate(direct);
    SimConfig unit = direct;
    unit.eps = 1.0;
    unit.horizon = horizon / eps;
    unit.dt = dt / eps;
    unit.seed = seed_rescaled;
    for (auto& v : unit.x0) v /= eps;

    const auto a = endpoints(direct, 1.0);
    const auto b = endpoints(unit, eps);
    const auto n = x0.size();
    const double m = static_cast<double>(paths);

    ScaleChangeReport rep;
    auto push = [&](std::string name, double da, double sa, double db, double sb) {
        ScaleChangeRow row{std::move(name), da, db, z_score(da, sa, db, sb), false};
        row.flagged = !(std::abs(row.z) <= 4.0);
        rep.max_abs_z = std::max(rep.max_abs_z, std::abs(row.z));
        rep.any_flagged = rep.any_flagged || row.flagged;
        rep.rows.push_back(std::move(row));
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> ca;
        std::vector<double> cb;
        for (const auto& s : a) ca.push_back(s.x[i]);
        for (const auto& s : b) cb.push_back(s.x[i]);
        const auto sa = summarize(ca);
        const auto sb = summarize(cb);
        const std::string idx = std::to_string(i + 1);
        push("mean_x" + idx, sa.mean, sa.std_error, sb.mean, sb.std_error);
        // Normal-theory standard error of the sample variance.
        const double va = sa.variance * std::sqrt(2.0 / std::max(1.0, m - 1.0));
        const double vb = sb.variance * std::sqrt(2.0 / std::max(1.0, m - 1.0));
        push("var_x" + idx, sa.variance, va, sb.variance, vb);
    }
    const auto cones = factorial(static_cast<int>(n));
    for (std::uint64_t r = 0; r < cones; ++r) {
        double fa = 0.0;
        double fb = 0.0;
        for (const auto& s : a) fa += s.cone == r ? 1.0 : 0.0;
        for (const auto& s : b) fb += s.cone == r ? 1.0 : 0.0;
        fa /= m;
        fb /= m;
        if (fa == 0.0 && fb == 0.0) continue;
        push("cone_" + Permutation::unrank(static_cast<int>(n), r).to_string(), fa, std::sqrt(fa * (1 - fa) / m), fb,
             std::sqrt(fb * (1 - fb) / m));
    }
    return rep;
}

}  // namespace oflab
