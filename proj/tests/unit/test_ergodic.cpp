#include <doctest.h>

#include <cmath>
#include <random>

#include "oflab/ergodic.hpp"
#include "oracles.hpp"

using oflab::DriftSpec;
using oflab::Permutation;

TEST_SUITE("ergodic") {

TEST_CASE("projected paths stay centered") {
    const auto traj = oflab::simulate_projected(DriftSpec::rank_based({3, 1, -1}), 10.0, 1e-2, 41);
    for (std::size_t k = 0; k <= traj.steps(); ++k) {
        const auto z = traj.state(k);
        CHECK(std::abs(z[0] + z[1] + z[2]) < 1e-12);
    }
}

TEST_CASE("cone measure is a probability and matches the stored path") {
    const auto spec = DriftSpec::rank_based({3, 1, -1});
    const auto mu = oflab::run_cone_measure(spec, 1000.0, 1e-2, 42, 0.1, 10);
    double total = 0.0;
    for (const auto& [s, w] : mu.weights) {
        CHECK(w >= 0.0);
        total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mu.batches.size() == 10);
    for (const auto& batch : mu.batches) {
        double bt = 0.0;
        for (const auto& [s, w] : batch) bt += w;
        CHECK(bt == doctest::Approx(1.0).epsilon(1e-12));
    }

    const auto stored = oflab::estimate_cone_measure(oflab::simulate_projected(spec, 1000.0, 1e-2, 42), 0.1, 10);
    for (const auto& s : oflab::all_permutations(3)) CHECK(stored.weight(s) == doctest::Approx(mu.weight(s)));

    CHECK(oflab::cone_measure_csv(mu).rfind("sigma,weight\n", 0) == 0);
}

TEST_CASE("two particles split their time evenly") {
    const auto mu = oflab::run_cone_measure(DriftSpec::rank_based({1, -1}), 1e4, 1e-2, 43);
    CHECK(std::abs(mu.weight(Permutation({1, 2})) - 0.5) < 0.02);
    CHECK(std::abs(mu.weight(Permutation({2, 1})) - 0.5) < 0.02);
}

TEST_CASE("velocity under a uniform cone measure is the ordering average") {
    std::mt19937_64 rng(44);
    for (int n = 2; n <= 4; ++n) {
        const auto spec = oracle::random_ssc_spec(n, rng);
        oflab::EmpiricalConeMeasure mu;
        mu.n = n;
        const auto perms = oflab::all_permutations(n);
        for (const auto& s : perms) mu.weights[s] = 1.0 / static_cast<double>(perms.size());
        const auto est = oflab::estimate_velocity(spec, mu);
        for (int i = 0; i < n; ++i) {
            double avg = 0.0;
            for (const auto& s : perms) avg += spec.velocity(s)[static_cast<std::size_t>(i)];
            avg /= static_cast<double>(perms.size());
            CHECK(est.v_by_index[static_cast<std::size_t>(i)] == doctest::Approx(avg));
        }
    }
    const auto rank = DriftSpec::rank_based({3, 1, -1});
    oflab::EmpiricalConeMeasure mu;
    mu.n = 3;
    for (const auto& s : oflab::all_permutations(3)) mu.weights[s] = 1.0 / 6.0;
    for (double v : oflab::estimate_velocity(rank, mu).v_by_index) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("velocity estimates agree across seeds") {
    const auto spec = DriftSpec::rank_based({3, 1, -1});
    const auto a = oflab::estimate_velocity(spec, oflab::run_cone_measure(spec, 2000.0, 1e-2, 45));
    const auto b = oflab::estimate_velocity(spec, oflab::run_cone_measure(spec, 2000.0, 1e-2, 46));
    CHECK(std::abs(a.v - b.v) < 3.0 * std::hypot(a.standard_error, b.standard_error) + 1e-12);
    CHECK(a.v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("index spread shrinks with the horizon") {
    const auto spec = DriftSpec::rank_based({3, 1, -1});
    int shrank = 0;
    const int replicates = 10;
    for (int r = 0; r < replicates; ++r) {
        const auto s1 = oflab::estimate_velocity(spec, oflab::run_cone_measure(spec, 100.0, 1e-2, 100 + r)).spread;
        const auto s4 = oflab::estimate_velocity(spec, oflab::run_cone_measure(spec, 400.0, 1e-2, 200 + r)).spread;
        if (s4 < s1) ++shrank;
    }
    CHECK(shrank >= 8);
}

TEST_CASE("scale change") {
    const auto spec = DriftSpec::rank_based({1, 0, -1});
    const std::vector<double> x0{0.0, 0.1, -0.1};
    for (double eps : {1.0, 0.01}) {
        const auto report = oflab::scale_change_check(spec, x0, eps, 0.5, 1e-3, 2000, 47, 48);
        CHECK_FALSE(report.rows.empty());
        CHECK_FALSE(report.any_flagged);
        CHECK(report.max_abs_z < 4.0);
    }
}

}
