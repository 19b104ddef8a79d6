#include <doctest.h>

#include <random>

#include "oflab/drift.hpp"
#include "oracles.hpp"

using oflab::DriftSpec;
using oflab::Permutation;
using oflab::TwoParticleClass;

namespace {

using Vec = std::vector<double>;

DriftSpec random_general(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<double>> table(oflab::factorial(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& row : table) {
        for (auto& v : row) v = u(rng);
    }
    return DriftSpec::general(n, table);
}

bool sc_by_brute_force(const DriftSpec& spec) {
    const int n = spec.n();
    for (const auto& w : oracle::all_words(n)) {
        const auto v = spec.velocity(Permutation(w));
        for (int i = 1; i < n; ++i) {
            double left = 0.0;
            double right = 0.0;
            for (int k = 0; k < i; ++k) left += v[static_cast<std::size_t>(w[k] - 1)];
            for (int k = i; k < n; ++k) right += v[static_cast<std::size_t>(w[k] - 1)];
            if (left / i < right / (n - i) - 1e-12) return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("drift") {

TEST_CASE("rank-based specs place velocities by rank") {
    const auto two = DriftSpec::rank_based({1, -1});
    CHECK(two.velocity(Permutation({1, 2})) == Vec{1, -1});
    CHECK(two.velocity(Permutation({2, 1})) == Vec{-1, 1});
    CHECK(DriftSpec::rank_based({1, 0, -1}).velocity(Permutation({2, 1, 3})) == Vec{0, 1, -1});
    CHECK(DriftSpec::rank_based({5}).velocity(Permutation({1})) == Vec{5});

    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    for (int n = 1; n <= 6; ++n) {
        Vec b(static_cast<std::size_t>(n));
        for (auto& v : b) v = g(rng);
        const auto spec = DriftSpec::rank_based(b);
        for (const auto& s : oflab::all_permutations(n)) {
            const auto v = spec.velocity(s);
            for (int i = 1; i <= n; ++i) CHECK(v[static_cast<std::size_t>(s(i) - 1)] == b[static_cast<std::size_t>(i - 1)]);
        }
    }
}

TEST_CASE("general specs and table validation") {
    const auto spec = oflab::two_particle({2, -1}, {-3, 1});
    CHECK(spec.n() == 2);
    CHECK_FALSE(spec.is_rank_based());
    CHECK(spec.velocity(Permutation({2, 1})) == Vec{-3, 1});
    std::vector<double> out(2);
    const int word[] = {1, 2};
    spec.velocity(word, out);
    CHECK(out == Vec{2, -1});

    std::map<Permutation, Vec> table{{Permutation({1, 2}), {0, 0}}};
    try {
        DriftSpec::from_table(table);
        FAIL("incomplete table accepted");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("21") != std::string::npos);
    }
    CHECK_THROWS_AS(DriftSpec::general(2, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(DriftSpec::general(2, {{0, 0}, {0, std::nan("")}}), std::invalid_argument);
    CHECK_THROWS_AS(DriftSpec::rank_based({1, INFINITY}), std::invalid_argument);
}

TEST_CASE("shifted adds a constant to every velocity") {
    const auto spec = DriftSpec::rank_based({1, 0, -1}).shifted(2.5);
    CHECK(spec.velocity(Permutation({3, 1, 2})) == Vec{2.5, 1.5, 3.5});
}

TEST_CASE("projected drift") {
    CHECK(oflab::projected_drift(oflab::two_particle({1, -1}, {0, 0})).velocity(Permutation({1, 2})) == Vec{1, -1});
    CHECK(oflab::projected_drift(oflab::two_particle({2, 0}, {0, 0})).velocity(Permutation({1, 2})) == Vec{1, -1});
    const auto p = oflab::projected_drift(DriftSpec::rank_based({3, 1, -1}));
    for (const auto& s : oflab::all_permutations(3)) {
        const auto v = p.velocity(s);
        CHECK(v[static_cast<std::size_t>(s(1) - 1)] == 2.0);
        CHECK(v[static_cast<std::size_t>(s(2) - 1)] == 0.0);
        CHECK(v[static_cast<std::size_t>(s(3) - 1)] == -2.0);
    }
}

TEST_CASE("stability condition examples") {
    CHECK(oflab::check_sc(DriftSpec::rank_based({1, 0, -1})).satisfies_sc);

    const auto diverging = oflab::two_particle({-1, 0}, {-1, 0});
    const auto r = oflab::check_sc(diverging);
    CHECK_FALSE(r.satisfies_sc);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].sigma == Permutation({1, 2}));
    CHECK(r.violations[0].split == 1);
    CHECK(r.violations[0].left_avg == -1.0);
    CHECK(r.violations[0].right_avg == 0.0);

    // Three particles: b(123) = (-0.5, 1, -1), b(132) = (2, -1, 1), rank
    // velocities (1, 0, -1) elsewhere.
    std::vector<std::vector<double>> rows;
    for (const auto& s : oflab::all_permutations(3)) {
        if (s == Permutation({1, 2, 3})) rows.push_back({-0.5, 1, -1});
        else if (s == Permutation({1, 3, 2})) rows.push_back({2, -1, 1});
        else rows.push_back(DriftSpec::rank_based({1, 0, -1}).velocity(s));
    }
    const auto c = oflab::check_sc(DriftSpec::general(3, rows));
    CHECK_FALSE(c.satisfies_sc);
    REQUIRE(c.violations.size() == 1);
    CHECK(c.violations[0].sigma == Permutation({1, 2, 3}));
    CHECK(c.violations[0].split == 1);
}

TEST_CASE("strong stability margin examples") {
    const auto a = oflab::check_ssc(DriftSpec::rank_based({1, 0, -1}));
    CHECK(a.b_bar == doctest::Approx(1.0));
    CHECK(a.satisfies_ssc);
    const auto z = oflab::check_ssc(oflab::two_particle({0, 0}, {0, 0}));
    CHECK(z.b_bar == 0.0);
    CHECK_FALSE(z.satisfies_ssc);
    CHECK(oflab::check_ssc(DriftSpec::rank_based({3, 1, -1})).b_bar == doctest::Approx(2.0));
}

TEST_CASE("random specs: margin matches brute force, SSC implies SC") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 3;
        const auto spec = random_general(n, rng);
        const auto r = oflab::check_ssc(spec);
        CHECK(r.b_bar == doctest::Approx(oracle::b_bar(spec)).epsilon(1e-12));
        CHECK(r.satisfies_sc == sc_by_brute_force(spec));
        CHECK(r.satisfies_ssc == (r.b_bar > 0.0));
        if (r.satisfies_ssc) CHECK(r.satisfies_sc);
    }
}

TEST_CASE("strictly decreasing rank vectors satisfy SSC") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 8;
        std::vector<double> b(static_cast<std::size_t>(n));
        for (auto& v : b) v = g(rng);
        std::sort(b.begin(), b.end(), std::greater<>());
        if (std::adjacent_find(b.begin(), b.end()) != b.end()) continue;
        CHECK(oflab::check_ssc(DriftSpec::rank_based(b)).satisfies_ssc);
    }
}

TEST_CASE("two-particle classification") {
    auto i = oflab::classify_two_particle(oflab::two_particle({1, -1}, {-1, 1}));
    CHECK(i.cls == TwoParticleClass::ConvConv);
    CHECK(i.b_minus == 2.0);
    CHECK(i.b_plus == -2.0);
    i = oflab::classify_two_particle(oflab::two_particle({-1, 0}, {1, 0}));
    CHECK(i.cls == TwoParticleClass::DivDiv);
    CHECK(i.b_minus == -1.0);
    CHECK(i.b_plus == 1.0);
    CHECK(oflab::classify_two_particle(0.0, 0.0).cls == TwoParticleClass::DegenerateZero);
    CHECK(oflab::classify_two_particle(1.0, 1.0).cls == TwoParticleClass::ConvDiv);
    CHECK(oflab::classify_two_particle(-1.0, -1.0).cls == TwoParticleClass::DivCon);
    CHECK_THROWS_AS(oflab::classify_two_particle(DriftSpec::rank_based({1, 0, -1})), std::invalid_argument);
}

TEST_CASE("two particles: class and stability agree") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto spec = oflab::two_particle({u(rng), u(rng)}, {u(rng), u(rng)});
        const auto info = oflab::classify_two_particle(spec);
        const auto r = oflab::check_ssc(spec);
        const bool conv = info.cls == TwoParticleClass::ConvConv;
        CHECK(conv == r.satisfies_sc);
        CHECK((conv && info.b_minus - info.b_plus > 0.0) == r.satisfies_ssc);
    }
    // On the boundary b_minus = 0 the margin is zero even though
    // b_minus - b_plus > 0.
    const auto edge = oflab::check_ssc(oflab::two_particle({0, 0}, {-1, 0}));
    CHECK(edge.satisfies_sc);
    CHECK(edge.b_bar == 0.0);
}

TEST_CASE("Lyapunov inequality for random SSC specs") {
    std::mt19937_64 rng(25);
    std::normal_distribution<double> g(0.0, 3.0);
    for (int s = 0; s < 10; ++s) {
        const int n = 2 + s % 4;
        const auto spec = oracle::random_ssc_spec(n, rng);
        const auto report = oflab::check_ssc(spec);
        REQUIRE(report.satisfies_ssc);
        const auto proj = oflab::projected_drift(spec);
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int k = 0; k < 1000; ++k) {
            std::vector<double> z(static_cast<std::size_t>(n));
            for (auto& x : z) x = g(rng);
            z = oflab::project_centered(z);
            const auto sigma = oflab::sigma_of(z);
            proj.velocity(sigma.word(), v);
            double lhs = 0.0;
            double max_abs = 0.0;
            for (int i = 0; i < n; ++i) {
                lhs += z[i] * v[i];
                max_abs = std::max(max_abs, std::abs(z[i]));
            }
            CHECK(lhs <= -report.b_bar * max_abs + 1e-9);
        }
    }
}

}
