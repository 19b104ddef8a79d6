#include "oflab/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oflab {

namespace {

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " has a non-finite entry");
    }
}

}  // namespace

DriftSpec DriftSpec::rank_based(std::vector<double> b) {
    if (b.empty()) throw std::invalid_argument("rank vector is empty");
    require_finite(b, "rank vector");
    DriftSpec s;
    s.n_ = static_cast<int>(b.size());
    s.kind_ = DriftKind::rank_based;
    s.rank_ = std::move(b);
    return s;
}

DriftSpec DriftSpec::general(int n, std::vector<std::vector<double>> table) {
    if (n < 1) throw std::invalid_argument("drift spec needs n >= 1");
    if (n > 10) throw std::invalid_argument("general drift tables are limited to n <= 10");
    const auto rows = factorial(n);
    if (table.size() != rows) throw std::invalid_argument("drift table must have n! rows");
    DriftSpec s;
    s.n_ = n;
    s.kind_ = DriftKind::general;
    s.table_.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(n));
    for (const auto& row : table) {
        if (row.size() != static_cast<std::size_t>(n)) {
            throw std::invalid_argument("drift table row has wrong length");
        }
        require_finite(row, "drift table row");
        s.table_.insert(s.table_.end(), row.begin(), row.end());
    }
    return s;
}

DriftSpec DriftSpec::from_table(const std::map<Permutation, std::vector<double>>& table) {
    if (table.empty()) throw std::invalid_argument("drift table is empty");
    const int n = table.begin()->first.size();
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(factorial(n)));
    std::vector<bool> seen(rows.size(), false);
    for (const auto& [sigma, v] : table) {
        if (sigma.size() != n) throw std::invalid_argument("drift table mixes permutation sizes");
        const auto r = static_cast<std::size_t>(sigma.rank());
        rows[r] = v;
        seen[r] = true;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!seen[r]) {
            throw std::invalid_argument("drift table is missing " + Permutation::unrank(n, r).to_string());
        }
    }
    return general(n, std::move(rows));
}

void DriftSpec::velocity(std::span<const int> word, std::span<double> out) const {
    const auto n = static_cast<std::size_t>(n_);
    if (kind_ == DriftKind::rank_based) {
        for (std::size_t k = 0; k < n; ++k) out[static_cast<std::size_t>(word[k] - 1)] = rank_[k];
        return;
    }
    const auto r = static_cast<std::size_t>(lexicographic_rank(word));
    const double* row = table_.data() + r * n;
    std::copy(row, row + n, out.begin());
}

std::vector<double> DriftSpec::velocity(const Permutation& sigma) const {
    if (sigma.size() != n_) throw std::invalid_argument("permutation size does not match drift spec");
    std::vector<double> out(static_cast<std::size_t>(n_));
    velocity(sigma.word(), out);
    return out;
}

DriftSpec DriftSpec::shifted(double c) const {
    DriftSpec s = *this;
    for (auto& v : s.rank_) v += c;
    for (auto& v : s.table_) v += c;
    return s;
}

DriftSpec two_particle(std::vector<double> b12, std::vector<double> b21) {
    if (b12.size() != 2 || b21.size() != 2) throw std::invalid_argument("two-particle velocities need length 2");
    return DriftSpec::general(2, {std::move(b12), std::move(b21)});
}

DriftSpec projected_drift(const DriftSpec& spec) {
    if (spec.is_rank_based()) return DriftSpec::rank_based(project_centered(spec.rank_vector()));
    std::vector<std::vector<double>> rows;
    for (const auto& sigma : all_permutations(spec.n())) {
        rows.push_back(project_centered(spec.velocity(sigma)));
    }
    return DriftSpec::general(spec.n(), std::move(rows));
}

namespace {

// Accumulates SC violations and the SSC margin for one sigma, given the
// velocities listed in rank order.
void scan_sigma(const Permutation& sigma, std::span<const double> by_rank, StabilityReport& rep) {
    const int n = static_cast<int>(by_rank.size());
    const double total = std::accumulate(by_rank.begin(), by_rank.end(), 0.0);
    const double mean = total / n;
    double prefix = 0.0;
    double centered_prefix = 0.0;
    for (int i = 1; i < n; ++i) {
        prefix += by_rank[static_cast<std::size_t>(i - 1)];
        centered_prefix += by_rank[static_cast<std::size_t>(i - 1)] - mean;
        const double left = prefix / i;
        const double right = (total - prefix) / (n - i);
        if (left < right - kStabilitySlack) rep.violations.push_back({sigma, i, left, right});
        rep.b_bar = std::min(rep.b_bar, centered_prefix);
    }
}

StabilityReport analyze(const DriftSpec& spec) {
    if (spec.n() < 2) throw std::invalid_argument("stability conditions need n >= 2");
    StabilityReport rep;
    rep.b_bar = std::numeric_limits<double>::infinity();
    if (spec.is_rank_based() && spec.n() > 8) {
        scan_sigma(Permutation::identity(spec.n()), spec.rank_vector(), rep);
    } else {
        for (const auto& sigma : all_permutations(spec.n())) {
            scan_sigma(sigma, gather(spec.velocity(sigma), sigma), rep);
        }
    }
    if (std::abs(rep.b_bar) <= kStabilitySlack) rep.b_bar = 0.0;
    rep.satisfies_sc = rep.violations.empty();
    rep.satisfies_ssc = rep.b_bar > 0.0;
    return rep;
}

}  // namespace

StabilityReport check_sc(const DriftSpec& spec) { return analyze(spec); }
StabilityReport check_ssc(const DriftSpec& spec) { return analyze(spec); }

std::string to_string(TwoParticleClass c) {
    switch (c) {
        case TwoParticleClass::ConvConv: return "ConvConv";
        case TwoParticleClass::ConvDiv: return "ConvDiv";
        case TwoParticleClass::DivCon: return "DivCon";
        case TwoParticleClass::DivDiv: return "DivDiv";
        case TwoParticleClass::DegenerateZero: return "DegenerateZero";
    }
    return "?";
}

TwoParticleInfo classify_two_particle(double b_minus, double b_plus) {
    TwoParticleInfo info{TwoParticleClass::DegenerateZero, b_minus, b_plus};
    if (b_minus == 0.0 && b_plus == 0.0) return info;
    const bool left_conv = b_minus >= 0.0;
    const bool right_conv = b_plus <= 0.0;
    if (left_conv && right_conv) info.cls = TwoParticleClass::ConvConv;
    else if (!left_conv && !right_conv) info.cls = TwoParticleClass::DivDiv;
    else if (left_conv) info.cls = TwoParticleClass::ConvDiv;
    else info.cls = TwoParticleClass::DivCon;
    return info;
}

TwoParticleInfo classify_two_particle(const DriftSpec& spec) {
    if (spec.n() != 2) throw std::invalid_argument("two-particle classification needs n = 2");
    const auto b12 = spec.velocity(Permutation({1, 2}));
    const auto b21 = spec.velocity(Permutation({2, 1}));
    return classify_two_particle(b12[0] - b12[1], b21[0] - b21[1]);
}

}  // namespace oflab
