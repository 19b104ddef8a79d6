#include <doctest.h>

#include <json.hpp>
#include <random>
#include <stdexcept>

#include "oflab/sticky.hpp"
#include "oracles.hpp"

using oflab::StickyPath;

namespace {

std::vector<double> grid(double T, std::size_t steps) {
    std::vector<double> g(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) g[k] = T * static_cast<double>(k) / static_cast<double>(steps);
    return g;
}

std::vector<double> random_sorted(std::mt19937_64& rng, int n, bool ties) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> level(0, 2);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (auto& v : y) v = ties ? 0.5 * level(rng) : u(rng);
    std::sort(y.begin(), y.end());
    return y;
}

std::vector<double> random_velocities(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> u(-3, 3);
    std::vector<double> b(static_cast<std::size_t>(n));
    for (auto& v : b) v = u(rng);
    return b;
}

}  // namespace

TEST_SUITE("sticky") {

TEST_CASE("stable blocks") {
    const std::vector<double> b{2, 1, -1, -2};
    CHECK(oflab::is_stable_block(b, 1, 4));
    CHECK(oflab::is_stable_block(b, 2, 2));
    const std::vector<double> c{0, -1, 1};
    CHECK_FALSE(oflab::is_stable_block(c, 1, 3));
    CHECK(oflab::is_stable_block(c, 1, 2));
    CHECK_FALSE(oflab::is_stable_block(c, 2, 3));
}

TEST_CASE("initial clusters") {
    SUBCASE("converging pair merges") {
        const std::vector<double> y{0, 0};
        const std::vector<double> b{1, -1};
        const auto s = oflab::initial_clusters(y, b);
        REQUIRE(s.clusters.size() == 1);
        CHECK(s.clusters[0].velocity == 0.0);
        CHECK(s.clusters[0].mass() == 2);
    }
    SUBCASE("diverging pair stays apart") {
        const std::vector<double> y{0, 0};
        const std::vector<double> b{-1, 1};
        CHECK(oflab::initial_clusters(y, b).clusters.size() == 2);
    }
    SUBCASE("equal velocities do not merge") {
        const std::vector<double> y{0, 0, 0};
        const std::vector<double> b{0, 1, -1};
        const auto s = oflab::initial_clusters(y, b);
        REQUIRE(s.clusters.size() == 2);
        CHECK(s.clusters[0].hi == 1);
        CHECK(s.clusters[1].lo == 2);
        CHECK(s.clusters[0].velocity == 0.0);
        CHECK(s.clusters[1].velocity == 0.0);
        const auto path = StickyPath::solve(y, b, 5.0);
        for (double t : {0.0, 1.0, 5.0}) {
            for (double p : path.position(t)) CHECK(p == 0.0);
        }
    }
    SUBCASE("distinct positions never merge at time zero") {
        const std::vector<double> y{0, 1};
        const std::vector<double> b{5, -5};
        CHECK(oflab::initial_clusters(y, b).clusters.size() == 2);
    }
    SUBCASE("input errors") {
        const std::vector<double> y{1, 0};
        const std::vector<double> b{0, 0};
        CHECK_THROWS_AS(oflab::initial_clusters(y, b), std::invalid_argument);
        const std::vector<double> one{0};
        CHECK_THROWS_AS(oflab::initial_clusters(one, b), std::invalid_argument);
    }
}

TEST_CASE("initial clusters agree with the exhaustive partition search") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 1 + trial % 7;
        const auto y = random_sorted(rng, n, true);
        const auto b = random_velocities(rng, n);
        const auto got = oflab::initial_clusters(y, b).clusters;
        const auto want = oracle::initial_clusters(y, b);
        REQUIRE(got.size() == want.size());
        for (std::size_t c = 0; c < got.size(); ++c) {
            CHECK(got[c].lo == want[c].lo);
            CHECK(got[c].hi == want[c].hi);
            CHECK(got[c].velocity == doctest::Approx(want[c].velocity));
        }
    }
}

TEST_CASE("two particles meet and move together") {
    const std::vector<double> y{0, 1};
    const std::vector<double> b{1, -1};
    auto s = oflab::initial_clusters(y, b);
    const auto events = oflab::advance(s, b, 2.0);
    REQUIRE(events.size() == 1);
    CHECK(events[0].time == doctest::Approx(0.5));
    REQUIRE(s.clusters.size() == 1);
    CHECK(s.clusters[0].position == doctest::Approx(0.5));
    CHECK(s.time == 2.0);

    const auto path = StickyPath::solve(y, b);
    CHECK(path.events().size() == 1);
    CHECK(path.position(0.25)[0] == doctest::Approx(0.25));
    CHECK(path.position(0.25)[1] == doctest::Approx(0.75));
    CHECK(path.position(10.0)[1] == doctest::Approx(0.5));
}

TEST_CASE("three-way collision and chained merges") {
    const std::vector<double> y{-1, 0, 1};
    const std::vector<double> b{1, 0, -1};
    const auto path = StickyPath::solve(y, b);
    REQUIRE(path.events().size() == 1);
    CHECK(path.events()[0].time == doctest::Approx(1.0));
    CHECK(path.segments().back().clusters.size() == 1);

    const std::vector<double> y2{0, 1, 3};
    const std::vector<double> b2{2, 0, -2};
    const auto chained = StickyPath::solve(y2, b2);
    REQUIRE(chained.events().size() == 2);
    CHECK(chained.events()[0].time == doctest::Approx(0.5));
    // {1,2} sits at 1 moving at 1, particle 3 at 2 moving at -2.
    CHECK(chained.events()[1].time == doctest::Approx(0.5 + 1.0 / 3.0));
    CHECK(chained.position(5.0)[0] == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("momentum, event count and order are preserved") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + trial % 6;
        const auto y = random_sorted(rng, n, trial % 2 == 0);
        const auto b = random_velocities(rng, n);
        const auto path = StickyPath::solve(y, b, 10.0);
        CHECK(path.events().size() <= static_cast<std::size_t>(n - 1));
        const double p0 = path.segments().front().momentum();
        for (const auto& seg : path.segments()) CHECK(seg.momentum() == doctest::Approx(p0).scale(1.0));
        double total_b = 0.0;
        for (double v : b) total_b += v;
        for (double t : {0.0, 0.3, 1.7, 10.0}) {
            const auto x = path.position(t);
            CHECK(std::is_sorted(x.begin(), x.end()));
            double mass_centre = 0.0;
            double start_centre = 0.0;
            for (int i = 0; i < n; ++i) {
                mass_centre += x[static_cast<std::size_t>(i)];
                start_centre += y[static_cast<std::size_t>(i)];
            }
            CHECK(mass_centre == doctest::Approx(start_centre + total_b * t).scale(1.0));
        }
    }
}

TEST_CASE("event-driven solution matches fine front tracking") {
    std::mt19937_64 rng(23);
    const double T = 2.0;
    const std::size_t steps = 20000;
    const double dt = T / static_cast<double>(steps);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 5;
        const auto y = random_sorted(rng, n, trial % 3 == 0);
        const auto b = random_velocities(rng, n);
        const auto reference = oracle::front_tracking(y, b, dt, steps);
        const auto path = StickyPath::solve(y, b, T);
        for (std::size_t k = 0; k <= steps; k += 1000) {
            const auto x = path.position(static_cast<double>(k) * dt);
            for (int i = 0; i < n; ++i) {
                const double want = reference[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
                CHECK(std::abs(x[static_cast<std::size_t>(i)] - want) <= 6.0 * n * dt);
            }
        }
    }
}

TEST_CASE("sampling on a grid") {
    const std::vector<double> y{0, 1};
    const std::vector<double> b{1, -1};
    const auto g = grid(1.0, 4);
    const auto traj = oflab::sticky_path(y, b, g);
    REQUIRE(traj.steps() == 4);
    CHECK(traj.state(1)[0] == doctest::Approx(0.25));
    CHECK(traj.state(4)[0] == doctest::Approx(0.5));
    CHECK(traj.state(4)[1] == doctest::Approx(0.5));
}

TEST_CASE("reflection decomposition") {
    const std::vector<double> y{0, 0};
    const std::vector<double> b{1, -1};
    const auto path = StickyPath::solve(y, b, 1.0);
    const auto r = oflab::reflection_decomposition(path, 0.5);
    REQUIRE(r.kappa_rate.size() == 2);
    CHECK(r.kappa_rate[0] == -1.0);
    CHECK(r.kappa_rate[1] == 1.0);
    CHECK(r.ell == 2.0);
    REQUIRE(r.gamma.size() == 3);
    CHECK(r.gamma[0] == 0.0);
    CHECK(r.gamma[1] == 0.5);
    CHECK(r.gamma[2] == 0.0);

    const std::vector<double> apart{0, 1};
    const auto free = oflab::reflection_decomposition(StickyPath::solve(apart, b, 2.0), 0.25);
    CHECK(free.ell == 0.0);
    for (double g : free.gamma) CHECK(g == 0.0);
    CHECK_THROWS_AS(oflab::reflection_decomposition(StickyPath::solve(apart, b, 2.0), 0.5), std::invalid_argument);
}

TEST_CASE("flow property and contractivity") {
    std::mt19937_64 rng(24);
    const auto g = grid(3.0, 300);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 6;
        const auto y = random_sorted(rng, n, trial % 2 == 0);
        const auto y2 = random_sorted(rng, n, trial % 4 == 0);
        const auto b = random_velocities(rng, n);
        CHECK(oflab::check_flow_property(y, b, 0.37, 3.0));
        CHECK(oflab::check_contractivity(y, y2, b, g));
    }
}

TEST_CASE("json export") {
    const std::vector<double> y{0, 1};
    const std::vector<double> b{1, -1};
    const auto j = nlohmann::json::parse(StickyPath::solve(y, b).to_json());
    CHECK(j.at("initial").size() == 2);
    CHECK(j.at("rank_velocities")[0] == 1.0);
    REQUIRE(j.at("events").size() == 1);
    CHECK(j.at("segments").size() == 2);
}

}
