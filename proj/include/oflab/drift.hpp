#pragma once

// Drift specifications b: S_n -> R^n and the stability analyzers.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "oflab/ordering.hpp"

namespace oflab {

enum class DriftKind { general, rank_based };

class DriftSpec {
public:
    DriftSpec() = default;

    /// b_{sigma(k)}(sigma) = b[k-1] for every sigma.
    static DriftSpec rank_based(std::vector<double> b);

    /// `table[r]` is b(sigma) for the permutation of lexicographic rank r.
    static DriftSpec general(int n, std::vector<std::vector<double>> table);

    /// Throws std::invalid_argument unless the map covers all of S_n.
    static DriftSpec from_table(const std::map<Permutation, std::vector<double>>& table);

    int n() const { return n_; }
    DriftKind kind() const { return kind_; }
    bool is_rank_based() const { return kind_ == DriftKind::rank_based; }

    /// Rank vector; empty for general specs.
    const std::vector<double>& rank_vector() const { return rank_; }

    /// out[i-1] = b_i(sigma) where `word` is sigma's 1-based word.
    void velocity(std::span<const int> word, std::span<double> out) const;

    std::vector<double> velocity(const Permutation& sigma) const;

    /// Adds c to every entry of every velocity vector.
    DriftSpec shifted(double c) const;

private:
    int n_ = 0;
    DriftKind kind_ = DriftKind::general;
    std::vector<double> rank_;
    std::vector<double> table_;  // n! rows of n, row r for lexicographic rank r
};

/// Two-particle spec from b(12) and b(21).
DriftSpec two_particle(std::vector<double> b12, std::vector<double> b21);

/// Spec with each b(sigma) replaced by its centered version.
DriftSpec projected_drift(const DriftSpec& spec);

struct StabilityViolation {
    Permutation sigma;
    int split = 0;  // prefix length i in 1..n-1
    double left_avg = 0.0;
    double right_avg = 0.0;
};

struct StabilityReport {
    bool satisfies_sc = false;
    bool satisfies_ssc = false;
    double b_bar = 0.0;
    std::vector<StabilityViolation> violations;
};

/// Slack applied to the prefix/suffix average comparison.
inline constexpr double kStabilitySlack = 1e-12;

/// Both conditions are evaluated; the two entry points return the same
/// report. Rank-based specs with n > 8 are checked on the identity only,
/// since their rank-ordered velocities do not depend on sigma.
StabilityReport check_sc(const DriftSpec& spec);
StabilityReport check_ssc(const DriftSpec& spec);

enum class TwoParticleClass { ConvConv, ConvDiv, DivCon, DivDiv, DegenerateZero };

std::string to_string(TwoParticleClass c);

struct TwoParticleInfo {
    TwoParticleClass cls = TwoParticleClass::DegenerateZero;
    double b_minus = 0.0;  // b_1(12) - b_2(12)
    double b_plus = 0.0;   // b_1(21) - b_2(21)
};

TwoParticleInfo classify_two_particle(const DriftSpec& spec);
TwoParticleInfo classify_two_particle(double b_minus, double b_plus);

}  // namespace oflab
