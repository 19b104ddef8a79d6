#include <algorithm>
#include <cmath>
#include <numbers>

#include "experiment_util.hpp"
#include "oflab/ergodic.hpp"
#include "oflab/harness/csv.hpp"
#include "oflab/harness/experiments.hpp"
#include "oflab/harness/svg.hpp"
#include "oflab/parallel.hpp"
#include "oflab/sde.hpp"
#include "oflab/stats.hpp"
#include "oflab/sticky.hpp"

namespace oflab::harness {

using detail::at_eps;
using detail::rung_seed;
using nlohmann::json;

namespace {

double max_spread(std::span<const double> x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

double centered_square(std::span<const double> x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += (v - mean) * (v - mean);
    return s;
}

}  // namespace

Report run_rank_sticky(const ExperimentConfig& cfg) {
    const auto& spec = detail::require_drift(cfg);
    if (!spec.is_rank_based()) throw ConfigError("/drift", "needs a rank-based drift");
    const int n = spec.n();
    const auto x0 = detail::start_point(cfg, n);
    auto y0 = x0;
    std::sort(y0.begin(), y0.end());
    const auto& b = spec.rank_vector();
    const double factor = param_number(cfg, "proportionality_factor");
    const double T = cfg.horizon;
    const double bound_per_eps = (4.0 * std::sqrt(2.0 * n) + 2.0 * n) * T;

    Report report;
    CsvTable csv({"eps", "dt", "mean_sup_sq_distance", "stderr", "bound", "ratio_to_eps"});
    Series sm{"mean sup |Y - xi|^2", {}, {}, false};
    Series sb{"(4 sqrt(2n) + 2n) eps T", {}, {}, true};
    std::vector<double> ratios;

    for (std::size_t r = 0; r < cfg.eps_ladder.size(); ++r) {
        const double eps = cfg.eps_ladder[r];
        SimConfig sim{spec, x0, eps, T, cfg.step_for(eps), rung_seed(cfg, r), cfg.paths};
        validate(sim);
        const auto grid = make_grid(sim.horizon, sim.dt);
        std::vector<double> times(grid.steps + 1);
        for (std::uint64_t k = 0; k <= grid.steps; ++k) times[k] = grid.time(k);
        const auto xi = sticky_path(y0, b, times);
        const auto sups = map_paths(cfg.paths, [&](std::uint64_t p) {
            double sup = 0.0;
            std::vector<double> y(static_cast<std::size_t>(n));
            simulate_path(sim, p, [&](std::uint64_t k, double, std::span<const double> x, std::span<const int>) {
                std::copy(x.begin(), x.end(), y.begin());
                std::sort(y.begin(), y.end());
                const auto ref = xi.state(k);
                double d = 0.0;
                for (int i = 0; i < n; ++i) d += (y[i] - ref[i]) * (y[i] - ref[i]);
                sup = std::max(sup, d);
            });
            return sup;
        });
        const auto s = summarize(sups);
        const double bound = bound_per_eps * eps;
        ratios.push_back(s.mean / eps);
        report.add(at_most(at_eps("mean_sup_sq_distance", eps), s.mean, bound));
        report.add(diagnostic(at_eps("ratio_to_eps", eps), s.mean / eps));
        csv.add_row({eps, grid.dt, s.mean, s.std_error, bound, s.mean / eps});
        sm.xs.push_back(eps);
        sm.ys.push_back(s.mean);
        sb.xs.push_back(eps);
        sb.ys.push_back(bound);
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    report.add(at_most("ratio_to_eps_spread", *hi / *lo, factor));

    const auto path = StickyPath::solve(y0, b, T);
    report.attach("sticky_path.json", path.to_json());
    report.attach("rank_sticky.csv", csv.str());
    report.attach("rank_sticky.svg",
                  render_svg({"Rank-based system against sticky dynamics", "eps", "mean sup squared distance", true,
                              true, {sm, sb}}));
    return report;
}

Report run_ordering_uniformity(const ExperimentConfig& cfg) {
    const auto& spec = detail::require_drift(cfg);
    const int n = spec.n();
    const auto x0 = detail::start_point(cfg, n);
    const auto cells = sigma_set(x0, 0.0);
    if (cells.size() < 2) throw ConfigError("/x0", "needs at least two coincident particles");
    const double min_p = param_number(cfg, "min_pvalue");

    Report report;
    CsvTable csv({"eps", "sigma", "count", "expected"});
    for (std::size_t r = 0; r < cfg.eps_ladder.size(); ++r) {
        const double eps = cfg.eps_ladder[r];
        SimConfig sim{spec, x0, eps, cfg.horizon, cfg.step_for(eps), rung_seed(cfg, r), cfg.paths};
        validate(sim);
        const auto grid = make_grid(sim.horizon, sim.dt);
        const auto finals = map_paths(cfg.paths, [&](std::uint64_t p) {
            std::vector<int> word;
            simulate_path(sim, p, [&](std::uint64_t k, double, std::span<const double>, std::span<const int> order) {
                if (k == grid.steps) word.assign(order.begin(), order.end());
            });
            return Permutation(word);
        });
        std::vector<double> observed(cells.size(), 0.0);
        std::size_t outside = 0;
        for (const auto& sigma : finals) {
            const auto it = std::lower_bound(cells.begin(), cells.end(), sigma);
            if (it != cells.end() && *it == sigma) observed[static_cast<std::size_t>(it - cells.begin())] += 1.0;
            else ++outside;
        }
        const double each = static_cast<double>(cfg.paths) / static_cast<double>(cells.size());
        const std::vector<double> expected(cells.size(), each);
        const double stat = chi_square_statistic(observed, expected);
        const double p = chi_square_pvalue(stat, static_cast<int>(cells.size()) - 1);
        report.add(greater_than(at_eps("chi_square_pvalue", eps), p, min_p));
        report.add(diagnostic(at_eps("chi_square_statistic", eps), stat));
        report.add(at_most(at_eps("orderings_outside_start_set", eps), static_cast<double>(outside), 0.0));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            csv.add_row({eps, cells[c].to_string(), static_cast<long long>(observed[c]), each});
        }
    }
    report.attach("orderings.csv", csv.str());
    return report;
}

Report run_aggregation(const ExperimentConfig& cfg) {
    const auto& spec = detail::require_drift(cfg);
    const int n = spec.n();
    const auto x0 = detail::start_point(cfg, n);
    const auto stability = check_sc(spec);
    const double T = cfg.horizon;

    Report report;
    report.add(holds("stability_condition", stability.satisfies_sc));
    CsvTable csv({"eps", "dt", "mean_sup_centered_sq", "stderr", "bound"});
    Series sm{"mean sup |Pi X|^2", {}, {}, false};
    Series sb{"(4 sqrt2 + 2)(n - 1) eps T", {}, {}, true};
    for (std::size_t r = 0; r < cfg.eps_ladder.size(); ++r) {
        const double eps = cfg.eps_ladder[r];
        SimConfig sim{spec, x0, eps, T, cfg.step_for(eps), rung_seed(cfg, r), cfg.paths};
        validate(sim);
        const auto sups = map_paths(cfg.paths, [&](std::uint64_t p) {
            double sup = 0.0;
            simulate_path(sim, p, [&](std::uint64_t, double, std::span<const double> x, std::span<const int>) {
                sup = std::max(sup, centered_square(x));
            });
            return sup;
        });
        const auto s = summarize(sups);
        const double bound = (4.0 * std::numbers::sqrt2 + 2.0) * (n - 1) * eps * T;
        report.add(at_most(at_eps("mean_sup_centered_sq", eps), s.mean, bound));
        csv.add_row({eps, make_grid(T, sim.dt).dt, s.mean, s.std_error, bound});
        sm.xs.push_back(eps);
        sm.ys.push_back(s.mean);
        sb.xs.push_back(eps);
        sb.ys.push_back(bound);
    }
    report.attach("aggregation.csv", csv.str());
    report.attach("aggregation.svg",
                  render_svg({"Cluster width", "eps", "mean sup centered square", true, true, {sm, sb}}));
    return report;
}

Report run_ergodic_velocity(const ExperimentConfig& cfg) {
    const auto& spec = detail::require_drift(cfg);
    const int n = spec.n();
    const auto x0 = detail::start_point(cfg, n);
    const double burn = param_number(cfg, "burn_in");
    const int batches = static_cast<int>(param_number(cfg, "batches"));
    const double tol = param_number(cfg, "velocity_tolerance");
    const double spread_bound = param_number(cfg, "spread_bound");
    const double direct_T = param_number(cfg, "direct_horizon");
    const double direct_dt = param_number(cfg, "direct_dt");
    if (!(burn >= 0.0 && burn < 1.0)) throw ConfigError("/params/burn_in", "must lie in [0, 1)");
    if (batches < 1) throw ConfigError("/params/batches", "must be positive");

    Report report;
    const auto ssc = check_ssc(spec);
    report.add(diagnostic("b_bar", ssc.b_bar));
    if (!ssc.satisfies_ssc) report.notes.push_back("drift does not satisfy the strong stability condition");

    const auto mu = run_cone_measure(spec, cfg.horizon, cfg.dt, rung_seed(cfg, 0, 7), burn, batches);
    const auto est = estimate_velocity(spec, mu);
    for (int i = 0; i < n; ++i) report.add(diagnostic("v_" + std::to_string(i + 1), est.v_by_index[i]));
    report.add(diagnostic("velocity", est.v));
    report.add(diagnostic("velocity_stderr", est.standard_error));
    report.add(less_than("index_spread", est.spread, spread_bound));

    if (spec.is_rank_based()) {
        auto y0 = x0;
        std::sort(y0.begin(), y0.end());
        const auto path = StickyPath::solve(y0, spec.rank_vector());
        const auto& last = path.segments().back();
        if (last.clusters.size() == 1) {
            report.add(within("velocity_vs_sticky", est.v, last.clusters.front().velocity, tol));
        } else {
            report.notes.push_back("sticky dynamics never form a single cluster; no sticky reference");
        }
    }

    const double eps = cfg.eps_ladder.front();
    SimConfig sim{spec, x0, eps, direct_T, direct_dt, rung_seed(cfg, 0), cfg.paths};
    validate(sim);
    const auto grid = make_grid(direct_T, direct_dt);
    const auto slopes = map_paths(cfg.paths, [&](std::uint64_t p) {
        double slope = 0.0;
        simulate_path(sim, p, [&](std::uint64_t k, double, std::span<const double> x, std::span<const int>) {
            if (k != grid.steps) return;
            for (int i = 0; i < n; ++i) slope += x[i] - x0[i];
            slope /= n * direct_T;
        });
        return slope;
    });
    const auto s = summarize(slopes);
    const double combined = std::hypot(s.std_error, est.standard_error);
    report.add(within(at_eps("direct_slope", eps), s.mean, est.v, 3.0 * combined));
    report.add(diagnostic(at_eps("direct_slope_stderr", eps), s.std_error));

    json velocity{{"v_by_index", est.v_by_index}, {"v", est.v}, {"spread", est.spread}, {"stderr", est.standard_error}};
    report.attach("velocity.json", velocity.dump(2) + "\n");
    report.attach("cone_measure.csv", cone_measure_csv(mu));
    return report;
}

Report run_counterexample_3p(const ExperimentConfig& cfg) {
    const auto lambda = param_numbers(cfg, "lambda");
    const auto eta = param_numbers(cfg, "eta");
    if (lambda.size() != 3) throw ConfigError("/params/lambda", "needs three entries");
    if (eta.size() != 3) throw ConfigError("/params/eta", "needs three entries");
    double rho = 0.0;
    try {
        rho = counterexample_rho(lambda, eta);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("/params", e.what());
    }
    const DriftSpec spec = cfg.drift ? *cfg.drift : counterexample_drift(lambda, eta);
    if (spec.n() != 3) throw ConfigError("/drift", "needs n = 3");
    const auto x0 = detail::start_point(cfg, 3);
    const double tol = param_number(cfg, "rho_tolerance");
    const Permutation s123({1, 2, 3});
    const Permutation s132({1, 3, 2});

    Report report;
    const auto sc = check_sc(spec);
    report.add(holds("stability_condition_fails", !sc.satisfies_sc));
    report.add(diagnostic("stability_violations", static_cast<double>(sc.violations.size())));
    report.add(diagnostic("rho_formula", rho));

    CsvTable csv({"eps", "dt", "rho_hat", "time_123", "time_132", "mean_spread_at_T"});
    Series sr{"rho hat", {}, {}, false};
    Series sf{"rho", {}, {}, true};
    std::vector<double> spreads;
    for (std::size_t r = 0; r < cfg.eps_ladder.size(); ++r) {
        const double eps = cfg.eps_ladder[r];
        SimConfig sim{spec, x0, eps, cfg.horizon, cfg.step_for(eps), rung_seed(cfg, r), cfg.paths};
        validate(sim);
        const auto grid = make_grid(sim.horizon, sim.dt);
        struct Out {
            double t123 = 0.0;
            double t132 = 0.0;
            double spread = 0.0;
        };
        const auto outs = map_paths(cfg.paths, [&](std::uint64_t p) {
            Out o;
            simulate_path(sim, p, [&](std::uint64_t k, double, std::span<const double> x, std::span<const int> order) {
                if (k == grid.steps) {
                    o.spread = max_spread(x);
                    return;
                }
                if (order[0] != 1) return;
                if (order[1] == 2) o.t123 += grid.dt;
                else o.t132 += grid.dt;
            });
            return o;
        });
        CompensatedSum a;
        CompensatedSum c;
        std::vector<double> sp;
        for (const auto& o : outs) {
            a.add(o.t123);
            c.add(o.t132);
            sp.push_back(o.spread);
        }
        const double rho_hat = a.value() / (a.value() + c.value());
        const double mean_spread = summarize(sp).mean;
        spreads.push_back(mean_spread);
        report.add(within(at_eps("rho_hat", eps), rho_hat, rho, tol));
        report.add(diagnostic(at_eps("mean_spread_at_T", eps), mean_spread));
        csv.add_row({eps, grid.dt, rho_hat, a.value(), c.value(), mean_spread});
        sr.xs.push_back(eps);
        sr.ys.push_back(rho_hat);
        sf.xs.push_back(eps);
        sf.ys.push_back(rho);
    }
    report.add(holds("spread_decreasing", detail::strictly_decreasing(spreads)));
    report.attach("counterexample.csv", csv.str());
    report.attach("counterexample.svg",
                  render_svg({"Share of ordering (123) while particle 1 leads from below", "eps", "fraction", true,
                              false, {sr, sf}}));
    return report;
}

}  // namespace oflab::harness
