#pragma once

// Permutations of particle indices and the ordering map of a configuration.
//
// A permutation is stored as its word (sigma(1) ... sigma(n)) with 1-based
// particle indices: sigma(k) is the index of the particle of rank k.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oflab {

class Permutation {
public:
    Permutation() = default;

    /// Throws std::invalid_argument unless `word` is a bijection of {1..n}.
    explicit Permutation(std::vector<int> word);

    static Permutation identity(int n);

    /// Parses "231" (n <= 9) or a comma-separated word "10,2,...".
    static Permutation parse(std::string_view text);

    /// Permutation of {1..n} at position `index` in lexicographic order.
    static Permutation unrank(int n, std::uint64_t index);

    int size() const { return static_cast<int>(word_.size()); }

    /// sigma(k) for 1 <= k <= n.
    int operator()(int k) const { return word_[static_cast<std::size_t>(k - 1)]; }

    std::span<const int> word() const { return word_; }

    Permutation inverse() const;

    /// (this o other)(k) = this(other(k)).
    Permutation compose(const Permutation& other) const;

    /// Position of the word in the lexicographic enumeration of S_n.
    std::uint64_t rank() const;

    std::string to_string() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> word_;
};

/// Lexicographic rank of a raw word; no validation.
std::uint64_t lexicographic_rank(std::span<const int> word);

std::uint64_t factorial(int n);

/// All of S_n in lexicographic order.
std::vector<Permutation> all_permutations(int n);

/// Sigma(x): the lexicographically smallest sigma with
/// x_{sigma(1)} <= ... <= x_{sigma(n)}.
Permutation sigma_of(std::span<const double> x);

/// Hot-path form of sigma_of. `order` holds a 1-based word on entry (any
/// permutation, typically the previous step's order) and Sigma(x) on exit.
/// Insertion sort keyed by (value, index), so near-sorted input costs O(n).
void update_order(std::span<const double> x, std::span<int> order);

/// All orderings of x, treating coordinates whose sorted gaps chain within
/// `tol` as tied. Contains sigma_of(x).
std::vector<Permutation> sigma_set(std::span<const double> x, double tol = 0.0);

/// True iff two coordinates differ by at most `tol`.
bool in_coincidence_set(std::span<const double> x, double tol = 0.0);

/// x minus its mean (orthogonal projection onto the zero-sum hyperplane).
std::vector<double> project_centered(std::span<const double> x);

/// x_{sigma(1)}, ..., x_{sigma(n)}.
std::vector<double> gather(std::span<const double> x, const Permutation& sigma);

}  // namespace oflab
