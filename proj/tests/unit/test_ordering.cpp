#include <doctest.h>

#include <random>

#include "oflab/ordering.hpp"
#include "oracles.hpp"

using oflab::Permutation;

namespace {

std::vector<int> word_of(const Permutation& p) { return {p.word().begin(), p.word().end()}; }

}  // namespace

TEST_SUITE("ordering") {

TEST_CASE("permutation construction and parsing") {
    CHECK(Permutation::parse("231") == Permutation({2, 3, 1}));
    CHECK(Permutation::parse("10,2,3,4,5,6,7,8,9,1").size() == 10);
    CHECK_THROWS_AS(Permutation({1, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation({0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation::parse("12a"), std::invalid_argument);
    CHECK(Permutation({3, 1, 2}).to_string() == "312");
}

TEST_CASE("rank and unrank are inverse and follow lexicographic order") {
    for (int n = 1; n <= 6; ++n) {
        const auto words = oracle::all_words(n);
        const auto perms = oflab::all_permutations(n);
        REQUIRE(perms.size() == words.size());
        REQUIRE(perms.size() == oflab::factorial(n));
        for (std::size_t r = 0; r < words.size(); ++r) {
            CHECK(word_of(perms[r]) == words[r]);
            CHECK(perms[r].rank() == r);
            CHECK(Permutation::unrank(n, r) == perms[r]);
            CHECK(oflab::lexicographic_rank(words[r]) == r);
        }
    }
}

TEST_CASE("inverse and composition") {
    const Permutation s({2, 3, 1});
    CHECK(s.compose(s.inverse()) == Permutation::identity(3));
    CHECK(s.inverse().compose(s) == Permutation::identity(3));
    const Permutation t({3, 2, 1});
    const auto st = s.compose(t);
    for (int k = 1; k <= 3; ++k) CHECK(st(k) == s(t(k)));
}

TEST_CASE("sigma_of examples") {
    CHECK(oflab::sigma_of(std::vector<double>{3, 1, 2}) == Permutation({2, 3, 1}));
    CHECK(oflab::sigma_of(std::vector<double>{0, 0}) == Permutation({1, 2}));
    CHECK(oflab::sigma_of(std::vector<double>{5, 5, 1}) == Permutation({3, 1, 2}));
}

TEST_CASE("sigma_of matches brute force, with and without ties") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coarse(0, 3);
    std::normal_distribution<double> fine;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + trial % 6;
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = trial % 2 ? coarse(rng) : fine(rng);
        const auto s = oflab::sigma_of(x);
        CHECK(word_of(s) == oracle::sigma_of(x));
        const auto sorted = oflab::gather(x, s);
        CHECK(std::is_sorted(sorted.begin(), sorted.end()));
    }
}

TEST_CASE("update_order agrees with sigma_of from any starting word") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> coarse(0, 2);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 5;
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = coarse(rng);
        auto start = word_of(Permutation::unrank(n, rng() % oflab::factorial(n)));
        oflab::update_order(x, start);
        CHECK(start == oracle::sigma_of(x));
    }
}

TEST_CASE("sigma_set examples") {
    using V = std::vector<Permutation>;
    CHECK(oflab::sigma_set(std::vector<double>{0, 0}) == V{Permutation({1, 2}), Permutation({2, 1})});
    CHECK(oflab::sigma_set(std::vector<double>{1, 2}) == V{Permutation({1, 2})});
    CHECK(oflab::sigma_set(std::vector<double>{0, 0, 1}) == V{Permutation({1, 2, 3}), Permutation({2, 1, 3})});
    CHECK(oflab::sigma_set(std::vector<double>{0, 1e-13, 2e-13}, 1.5e-13).size() == 6);
}

TEST_CASE("sigma_set equals the brute-force set and is closed under tie swaps") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> coarse(0, 2);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + trial % 5;
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = coarse(rng);
        const auto got = oflab::sigma_set(x, 0.0);
        const auto want = oracle::sorting_words(x);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(word_of(got[i]) == want[i]);
        CHECK(std::binary_search(got.begin(), got.end(), oflab::sigma_of(x)));
        for (int i = 1; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                if (x[i - 1] != x[j - 1]) continue;
                for (const auto& s : got) {
                    auto w = word_of(s);
                    for (auto& k : w) k = k == i ? j : (k == j ? i : k);
                    CHECK(std::binary_search(got.begin(), got.end(), Permutation(w)));
                }
            }
        }
    }
}

TEST_CASE("in_coincidence_set") {
    CHECK(oflab::in_coincidence_set(std::vector<double>{0, 0}));
    CHECK_FALSE(oflab::in_coincidence_set(std::vector<double>{0, 1}));
    CHECK(oflab::in_coincidence_set(std::vector<double>{1, 1 + 1e-15}, 1e-12));
    CHECK_FALSE(oflab::in_coincidence_set(std::vector<double>{1, 1 + 1e-15}, 0.0));
}

TEST_CASE("project_centered examples and properties") {
    CHECK(oflab::project_centered(std::vector<double>{1, -1}) == std::vector<double>{1, -1});
    CHECK(oflab::project_centered(std::vector<double>{2, 0}) == std::vector<double>{1, -1});
    CHECK(oflab::project_centered(std::vector<double>{3, 0, 0}) == std::vector<double>{2, -1, -1});

    std::mt19937_64 rng(14);
    std::normal_distribution<double> g(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 7;
        std::vector<double> x(static_cast<std::size_t>(n));
        double scale = 0.0;
        for (auto& v : x) {
            v = g(rng);
            scale = std::max(scale, std::abs(v));
        }
        const auto p = oflab::project_centered(x);
        double sum = 0.0;
        for (double v : p) sum += v;
        CHECK(std::abs(sum) <= 1e-12 * n * scale);
        const auto pp = oflab::project_centered(p);
        const double c = g(rng);
        auto shifted = x;
        for (auto& v : shifted) v += c;
        const auto ps = oflab::project_centered(shifted);
        for (int i = 0; i < n; ++i) {
            CHECK(pp[i] == doctest::Approx(p[i]).epsilon(1e-12).scale(scale));
            CHECK(std::abs(ps[i] - p[i]) <= 1e-12 * (scale + std::abs(c)));
        }
    }
}

}
