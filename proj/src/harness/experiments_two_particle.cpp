#include <algorithm>
#include <cmath>
#include <numbers>

#include "experiment_util.hpp"
#include "oflab/analytics2p.hpp"
#include "oflab/harness/csv.hpp"
#include "oflab/harness/experiments.hpp"
#include "oflab/harness/svg.hpp"
#include "oflab/parallel.hpp"
#include "oflab/sde.hpp"
#include "oflab/stats.hpp"

namespace oflab::harness {

using detail::at_eps;
using detail::rung_seed;

namespace {

TwoParticleInfo gap_drifts(const ExperimentConfig& cfg) {
    return classify_two_particle(detail::require_drift(cfg, 2));
}

}  // namespace

Report run_two_particle_selection(const ExperimentConfig& cfg) {
    const auto& spec = detail::require_drift(cfg, 2);
    const auto info = classify_two_particle(spec);
    if (info.cls != TwoParticleClass::DivDiv) {
        throw ConfigError("/drift", "needs a diverging pair (b_minus < 0 < b_plus), got " + to_string(info.cls));
    }
    const double weight = bernoulli_weight(info.b_minus, info.b_plus);
    const double tol = param_number(cfg, "tolerance");
    const double refined_ratio = param_number(cfg, "refined_dt_ratio");
    const auto refined_paths = static_cast<std::uint64_t>(param_number(cfg, "refined_paths"));
    const auto x0 = detail::start_point(cfg, 2);

    Report report;
    report.notes.push_back("P(21) is gated against -b_minus/(b_plus-b_minus) at the configured step; "
                           "the refined rows resolve the boundary layer with dt = refined_dt_ratio * eps");
    CsvTable csv({"eps", "dt", "paths", "p21", "p21_stderr", "p12", "p12_refined", "refined_dt"});
    Series s21{"P(21)", {}, {}, false};
    Series s12{"P(12) refined dt", {}, {}, false};
    Series sw{"-b-/(b+-b-)", {}, {}, true};
    Series sc{"b+/(b+-b-)", {}, {}, true};

    for (std::size_t r = 0; r < cfg.eps_ladder.size(); ++r) {
        const double eps = cfg.eps_ladder[r];
        SimConfig sim{spec, x0, eps, cfg.horizon, cfg.step_for(eps), rung_seed(cfg, r), cfg.paths};
        validate(sim);
        const auto grid = make_grid(sim.horizon, sim.dt);
        const auto ends = map_paths(cfg.paths, [&](std::uint64_t p) {
            double ended_21 = 0.0;
            simulate_path(sim, p, [&](std::uint64_t k, double, std::span<const double>, std::span<const int> order) {
                if (k == grid.steps) ended_21 = order[0] == 2 ? 1.0 : 0.0;
            });
            return ended_21;
        });
        const auto s = summarize(ends);
        report.add(within(at_eps("p21", eps), s.mean, weight, tol));
        report.add(diagnostic(at_eps("p21_stderr", eps), s.std_error));
        report.add(diagnostic(at_eps("p12", eps), 1.0 - s.mean));

        // Gap process on a finer step, stopped once the drift has carried it
        // far outside the boundary layer.
        const double fine_dt = std::min(sim.dt, refined_ratio * eps);
        const double exit = 40.0 * eps / std::min(-info.b_minus, info.b_plus);
        GapConfig gap{info.b_minus, info.b_plus, x0[0] - x0[1], eps, cfg.horizon, fine_dt, rung_seed(cfg, r, 1)};
        const auto below = map_paths(refined_paths, [&](std::uint64_t p) {
            double last = gap.z0;
            simulate_gap_path(gap, p, [&](std::uint64_t, double, double z) {
                last = z;
                return std::abs(z) < exit;
            });
            return last <= 0.0 ? 1.0 : 0.0;
        });
        const double p12_fine = summarize(below).mean;
        report.add(diagnostic(at_eps("p12_refined", eps), p12_fine));
        report.add(diagnostic(at_eps("refined_dt", eps), make_grid(cfg.horizon, fine_dt).dt));

        csv.add_row({eps, grid.dt, static_cast<long long>(cfg.paths), s.mean, s.std_error, 1.0 - s.mean, p12_fine,
                     make_grid(cfg.horizon, fine_dt).dt});
        s21.xs.push_back(eps);
        s21.ys.push_back(s.mean);
        s12.xs.push_back(eps);
        s12.ys.push_back(p12_fine);
        sw.xs.push_back(eps);
        sw.ys.push_back(weight);
        sc.xs.push_back(eps);
        sc.ys.push_back(1.0 - weight);
    }
    report.add(diagnostic("bernoulli_weight", weight));
    report.add(diagnostic("complementary_weight", 1.0 - weight));
    report.attach("selection.csv", csv.str());
    report.attach("selection.svg", render_svg({"Final ordering of a diverging pair", "eps", "probability", true,
                                               false, {s21, s12, sw, sc}}));
    return report;
}

Report run_two_particle_cluster(const ExperimentConfig& cfg) {
    const auto& spec = detail::require_drift(cfg, 2);
    const auto limit = two_particle_limit(spec);
    if (!limit.velocity) {
        throw ConfigError("/drift", "needs a converging pair with b_minus > b_plus, got " + to_string(limit.cls));
    }
    const double v = *limit.velocity;
    const double rho = *limit.rho;
    const double tol = param_number(cfg, "velocity_tolerance");
    const auto x0 = detail::start_point(cfg, 2);
    const double T = cfg.horizon;

    Report report;
    CsvTable csv({"eps", "dt", "velocity", "velocity_stderr", "mean_sup_gap_sq", "bound", "time_fraction_12"});
    Series sv{"mean sup gap^2", {}, {}, false};
    Series sb{"(8 sqrt2 + 4) eps T", {}, {}, true};

    for (std::size_t r = 0; r < cfg.eps_ladder.size(); ++r) {
        const double eps = cfg.eps_ladder[r];
        SimConfig sim{spec, x0, eps, T, cfg.step_for(eps), rung_seed(cfg, r), cfg.paths};
        validate(sim);
        const auto grid = make_grid(sim.horizon, sim.dt);
        struct Out {
            double velocity = 0.0;
            double sup_gap_sq = 0.0;
            double time_12 = 0.0;
        };
        const auto outs = map_paths(cfg.paths, [&](std::uint64_t p) {
            Out o;
            double in_12 = 0.0;
            simulate_path(sim, p, [&](std::uint64_t k, double, std::span<const double> x, std::span<const int> order) {
                const double gap = x[0] - x[1];
                o.sup_gap_sq = std::max(o.sup_gap_sq, gap * gap);
                if (k < grid.steps && order[0] == 1) in_12 += grid.dt;
                if (k == grid.steps) o.velocity = ((x[0] - x0[0]) + (x[1] - x0[1])) / (2.0 * T);
            });
            o.time_12 = in_12 / T;
            return o;
        });
        std::vector<double> vel;
        std::vector<double> sup;
        std::vector<double> frac;
        for (const auto& o : outs) {
            vel.push_back(o.velocity);
            sup.push_back(o.sup_gap_sq);
            frac.push_back(o.time_12);
        }
        const auto sv_ = summarize(vel);
        const double mean_sup = summarize(sup).mean;
        const double bound = (8.0 * std::numbers::sqrt2 + 4.0) * eps * T;
        const double mean_frac = summarize(frac).mean;
        report.add(within(at_eps("velocity", eps), sv_.mean, v, tol));
        report.add(at_most(at_eps("mean_sup_gap_sq", eps), mean_sup, bound));
        report.add(diagnostic(at_eps("velocity_stderr", eps), sv_.std_error));
        report.add(diagnostic(at_eps("time_fraction_12", eps), mean_frac));
        csv.add_row({eps, grid.dt, sv_.mean, sv_.std_error, mean_sup, bound, mean_frac});
        sv.xs.push_back(eps);
        sv.ys.push_back(mean_sup);
        sb.xs.push_back(eps);
        sb.ys.push_back(bound);
    }
    report.add(diagnostic("cluster_velocity", v));
    report.add(diagnostic("limit_time_fraction_12", rho));
    report.attach("cluster.csv", csv.str());
    report.attach("cluster.svg",
                  render_svg({"Width of a converging pair", "eps", "mean sup gap^2", true, true, {sv, sb}}));
    return report;
}

Report run_arcsine(const ExperimentConfig& cfg) {
    const auto info = gap_drifts(cfg);
    if (info.cls != TwoParticleClass::DegenerateZero) {
        throw ConfigError("/drift", "needs equal velocities in both orderings, got " + to_string(info.cls));
    }
    const auto& spec = *cfg.drift;
    const double bound = param_number(cfg, "ks_bound");
    const auto x0 = detail::start_point(cfg, 2);

    Report report;
    CsvTable csv({"eps", "path", "fraction_12"});
    Plot plot{"Occupation of ordering (12)", "fraction of time", "CDF", false, false, {}};
    for (std::size_t r = 0; r < cfg.eps_ladder.size(); ++r) {
        const double eps = cfg.eps_ladder[r];
        SimConfig sim{spec, x0, eps, cfg.horizon, cfg.step_for(eps), rung_seed(cfg, r), cfg.paths};
        validate(sim);
        const auto grid = make_grid(sim.horizon, sim.dt);
        auto fractions = map_paths(cfg.paths, [&](std::uint64_t p) {
            std::uint64_t in_12 = 0;
            simulate_path(sim, p, [&](std::uint64_t k, double, std::span<const double>, std::span<const int> order) {
                if (k < grid.steps && order[0] == 1) ++in_12;
            });
            return static_cast<double>(in_12) / static_cast<double>(grid.steps);
        });
        for (std::size_t p = 0; p < fractions.size(); ++p) {
            csv.add_row({eps, static_cast<long long>(p), fractions[p]});
        }
        const double ks = ks_statistic(fractions, arcsine_cdf);
        report.add(less_than(at_eps("ks_arcsine", eps), ks, bound));
        report.add(diagnostic(at_eps("mean_fraction_12", eps), summarize(fractions).mean));

        std::sort(fractions.begin(), fractions.end());
        Series emp{at_eps("empirical", eps), {}, {}, true};
        for (int i = 0; i <= 100; ++i) {
            const double u = i / 100.0;
            const auto below = std::upper_bound(fractions.begin(), fractions.end(), u) - fractions.begin();
            emp.xs.push_back(u);
            emp.ys.push_back(static_cast<double>(below) / static_cast<double>(fractions.size()));
        }
        plot.series.push_back(std::move(emp));
    }
    Series law{"arcsine", {}, {}, true};
    for (int i = 0; i <= 100; ++i) {
        law.xs.push_back(i / 100.0);
        law.ys.push_back(arcsine_cdf(i / 100.0));
    }
    plot.series.push_back(std::move(law));
    report.attach("arcsine.csv", csv.str());
    report.attach("arcsine.svg", render_svg(plot));
    return report;
}

Report run_limit_path_z(const ExperimentConfig& cfg) {
    const auto info = gap_drifts(cfg);
    const double z0 = param_number(cfg, "z0");
    if (z0 == 0.0) throw ConfigError("/params/z0", "must be nonzero");

    Report report;
    CsvTable csv({"eps", "dt", "mean_sup_distance", "stderr"});
    Series sd{"mean sup |Z - z|", {}, {}, false};
    std::vector<double> distances;
    for (std::size_t r = 0; r < cfg.eps_ladder.size(); ++r) {
        const double eps = cfg.eps_ladder[r];
        GapConfig gap{info.b_minus, info.b_plus, z0, eps, cfg.horizon, cfg.step_for(eps), rung_seed(cfg, r)};
        const auto grid = make_grid(gap.horizon, gap.dt);
        std::vector<double> limit(grid.steps + 1);
        for (std::uint64_t k = 0; k <= grid.steps; ++k) limit[k] = limit_gap(z0, info.b_minus, info.b_plus, grid.time(k));
        const auto sups = map_paths(cfg.paths, [&](std::uint64_t p) {
            double sup = 0.0;
            simulate_gap_path(gap, p, [&](std::uint64_t k, double, double z) { sup = std::max(sup, std::abs(z - limit[k])); });
            return sup;
        });
        const auto s = summarize(sups);
        distances.push_back(s.mean);
        report.add(diagnostic(at_eps("mean_sup_distance", eps), s.mean));
        csv.add_row({eps, grid.dt, s.mean, s.std_error});
        sd.xs.push_back(eps);
        sd.ys.push_back(s.mean);
    }
    report.add(holds("sup_distance_decreasing", detail::strictly_decreasing(distances)));
    report.add(diagnostic("b_minus", info.b_minus));
    report.add(diagnostic("b_plus", info.b_plus));

    const auto grid = make_grid(cfg.horizon, cfg.step_for(cfg.eps_ladder.back()));
    std::vector<double> times;
    const std::uint64_t stride = std::max<std::uint64_t>(1, grid.steps / 400);
    for (std::uint64_t k = 0; k <= grid.steps; k += stride) times.push_back(grid.time(k));
    const auto lp = limit_path_z(z0, info.b_minus, info.b_plus, times);
    CsvTable path_csv({"t", "z_limit"});
    for (std::size_t i = 0; i < lp.times.size(); ++i) path_csv.add_row({lp.times[i], lp.values[i]});

    report.attach("limit_distance.csv", csv.str());
    report.attach("limit_path.csv", path_csv.str());
    report.attach("limit_distance.svg",
                  render_svg({"Gap process against its zero-noise limit", "eps", "mean sup distance", true, true, {sd}}));
    return report;
}

Report run_hitting_prob(const ExperimentConfig& cfg) {
    const double c_minus = param_number(cfg, "c_minus");
    const double c_plus = param_number(cfg, "c_plus");
    if (!(c_minus < 0.0 && c_plus > 0.0)) throw ConfigError("/params", "needs c_minus < 0 < c_plus");
    const double exponent = param_number(cfg, "delta_exponent");
    const double rel_tol = param_number(cfg, "quadrature_rel_tol");
    const double limit_tol = param_number(cfg, "limit_tolerance");
    const double mc_eps = param_number(cfg, "mc_eps");
    const auto a_minus = Branch::constant_value(c_minus);
    const auto a_plus = Branch::constant_value(c_plus);
    const double limit = c_plus / (c_plus - c_minus);

    Report report;
    CsvTable csv({"eps", "delta", "quadrature", "closed_form", "rel_error", "varying_branch"});
    Series sq{"quadrature", {}, {}, false};
    Series sl{"a+/(a+-a-)", {}, {}, true};
    // Branches that vary near the origin, as a smoke test of the
    // non-constant path through the quadrature.
    const auto v_minus = Branch::function([c_minus](double y) { return c_minus * (1.0 - y); });
    const auto v_plus = Branch::function([c_plus](double y) { return c_plus * (1.0 - y); });
    const double cap = exit_radius_bound(v_minus, v_plus);

    for (double eps : cfg.eps_ladder) {
        const double delta = std::pow(eps, exponent);
        const double q = hitting_prob(a_minus, a_plus, delta, eps);
        const double closed = hitting_prob_constant(c_minus, c_plus, delta, eps);
        const double rel = std::abs(q - closed) / closed;
        report.add(at_most(at_eps("quadrature_rel_error", eps), rel, rel_tol));
        report.add(diagnostic(at_eps("hitting_prob", eps), q));
        const double varying = delta < cap ? hitting_prob(v_minus, v_plus, delta, eps) : std::nan("");
        report.add(diagnostic(at_eps("varying_branch", eps), varying));
        csv.add_row({eps, delta, q, closed, rel, varying});
        sq.xs.push_back(eps);
        sq.ys.push_back(q);
        sl.xs.push_back(eps);
        sl.ys.push_back(limit);
    }
    const double eps_min = cfg.eps_ladder.back();
    report.add(within(at_eps("limit", eps_min), hitting_prob(a_minus, a_plus, std::pow(eps_min, exponent), eps_min),
                      limit, limit_tol));

    const double delta = std::pow(mc_eps, exponent);
    GapConfig gap{c_minus, c_plus, 0.0, mc_eps, cfg.horizon, cfg.dt, rung_seed(cfg, 0)};
    const auto exits = map_paths(cfg.paths, [&](std::uint64_t p) {
        double side = std::nan("");
        simulate_gap_path(gap, p, [&](std::uint64_t, double, double z) {
            if (z >= delta) side = 1.0;
            if (z <= -delta) side = 0.0;
            return std::isnan(side);
        });
        return side;
    });
    std::size_t unresolved = 0;
    std::vector<double> sides;
    for (double s : exits) {
        if (std::isnan(s)) ++unresolved;
        else sides.push_back(s);
    }
    const auto s = summarize(sides);
    const double expected = hitting_prob(a_minus, a_plus, delta, mc_eps);
    report.add(within(at_eps("monte_carlo", mc_eps), s.mean, expected, 3.0 * s.std_error));
    report.add(diagnostic(at_eps("monte_carlo_stderr", mc_eps), s.std_error));
    report.add(at_most("monte_carlo_unresolved_paths", static_cast<double>(unresolved), 0.0));

    report.attach("hitting.csv", csv.str());
    report.attach("hitting.svg",
                  render_svg({"Exit through +delta, delta = eps^p", "eps", "probability", true, false, {sq, sl}}));
    return report;
}

Report run_laplace(const ExperimentConfig& cfg) {
    const double z0 = param_number(cfg, "z0");
    const double b_plus = param_number(cfg, "b_plus");
    const double alpha = param_number(cfg, "alpha");
    const double tol = param_number(cfg, "tolerance");
    if (!(z0 > 0.0)) throw ConfigError("/params/z0", "must be positive");
    if (!(alpha > 0.0)) throw ConfigError("/params/alpha", "must be positive");

    Report report;
    report.notes.push_back("paths still above 0 at T contribute 0, which biases the estimate by at most exp(-alpha T)");
    CsvTable csv({"eps", "dt", "monte_carlo", "stderr", "formula", "unhit_paths"});
    for (std::size_t r = 0; r < cfg.eps_ladder.size(); ++r) {
        const double eps = cfg.eps_ladder[r];
        GapConfig gap{b_plus, b_plus, z0, eps, cfg.horizon, cfg.step_for(eps), rung_seed(cfg, r)};
        const auto values = map_paths(cfg.paths, [&](std::uint64_t p) {
            double v = 0.0;
            simulate_gap_path(gap, p, [&](std::uint64_t, double t, double z) {
                if (z > 0.0) return true;
                v = std::exp(-alpha * t);
                return false;
            });
            return v;
        });
        const auto unhit = std::count(values.begin(), values.end(), 0.0);
        const auto s = summarize(values);
        const double formula = laplace_hitting_time(z0, b_plus, eps, alpha);
        report.add(within(at_eps("laplace_monte_carlo", eps), s.mean, formula, tol));
        report.add(diagnostic(at_eps("laplace_formula", eps), formula));
        report.add(diagnostic(at_eps("laplace_stderr", eps), s.std_error));
        csv.add_row({eps, make_grid(gap.horizon, gap.dt).dt, s.mean, s.std_error, formula,
                      static_cast<long long>(unhit)});
    }

    // At alpha = 0 and a drift pushing away from the origin the transform is
    // the probability of ever hitting 0, exp(-b z0 / (2 eps)).
    const double b_away = param_number(cfg, "identity_b_plus");
    const double eps = cfg.eps_ladder.front();
    const double at_zero = laplace_hitting_time(z0, b_away, eps, 0.0);
    const double identity = std::exp(-b_away * z0 / (2.0 * eps));
    const double rel = std::abs(at_zero - identity) / identity;
    report.add(at_most("alpha_zero_identity_rel_error", rel, param_number(cfg, "identity_rel_tol")));
    report.attach("laplace.csv", csv.str());
    return report;
}

Report run_coincidence(const ExperimentConfig& cfg) {
    const auto& spec = detail::require_drift(cfg, 2);
    const auto deltas = param_numbers(cfg, "deltas");
    if (deltas.empty()) throw ConfigError("/params/deltas", "needs at least one value");
    const double last_bound = param_number(cfg, "last_bound");
    const auto x0 = detail::start_point(cfg, 2);

    Report report;
    CsvTable csv({"eps", "delta", "fraction"});
    Plot plot{"Time with |x1 - x2| <= delta", "delta", "fraction of time", true, true, {}};
    for (std::size_t r = 0; r < cfg.eps_ladder.size(); ++r) {
        const double eps = cfg.eps_ladder[r];
        SimConfig sim{spec, x0, eps, cfg.horizon, cfg.step_for(eps), rung_seed(cfg, r), cfg.paths};
        validate(sim);
        const auto grid = make_grid(sim.horizon, sim.dt);
        const auto counts = map_paths(cfg.paths, [&](std::uint64_t p) {
            std::vector<double> c(deltas.size(), 0.0);
            simulate_path(sim, p, [&](std::uint64_t k, double, std::span<const double> x, std::span<const int>) {
                if (k == grid.steps) return;
                for (std::size_t d = 0; d < deltas.size(); ++d) {
                    if (in_coincidence_set(x, deltas[d])) c[d] += 1.0;
                }
            });
            return c;
        });
        std::vector<double> fractions;
        Series s{at_eps("fraction", eps), {}, {}, false};
        for (std::size_t d = 0; d < deltas.size(); ++d) {
            double total = 0.0;
            for (const auto& c : counts) total += c[d];
            const double f = total / (static_cast<double>(grid.steps) * static_cast<double>(cfg.paths));
            fractions.push_back(f);
            report.add(diagnostic(at_eps("fraction@delta=" + format_number(deltas[d]), eps), f));
            csv.add_row({eps, deltas[d], f});
            s.xs.push_back(deltas[d]);
            s.ys.push_back(f);
        }
        report.add(holds(at_eps("fraction_decreasing_in_delta", eps), detail::strictly_decreasing(fractions)));
        report.add(less_than(at_eps("fraction_at_smallest_delta", eps), fractions.back(), last_bound));
        plot.series.push_back(std::move(s));
    }
    report.attach("coincidence.csv", csv.str());
    report.attach("coincidence.svg", render_svg(plot));
    return report;
}

}  // namespace oflab::harness
