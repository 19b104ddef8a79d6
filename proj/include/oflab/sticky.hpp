#pragma once

// Event-driven sticky particle dynamics with unit masses: particles move at
// their rank velocity b_i until they collide, colliding clusters merge and
// move at the mean velocity of their members.

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oflab/trajectory.hpp"

namespace oflab {

struct Cluster {
    int lo = 1;  // inclusive, 1-based
    int hi = 1;
    double position = 0.0;
    double velocity = 0.0;

    int mass() const { return hi - lo + 1; }
    bool contains(int i) const { return lo <= i && i <= hi; }
};

struct StickyState {
    std::vector<Cluster> clusters;
    double time = 0.0;

    int n() const { return clusters.empty() ? 0 : clusters.back().hi; }
    std::vector<double> positions() const;
    std::vector<double> velocities() const;
    double momentum() const;
};

struct StickyEvent {
    double time = 0.0;
    std::vector<std::pair<int, int>> merged;  // index ranges of the clusters formed
};

/// True iff every split of b[lo..hi] has left mean >= right mean (up to a
/// 1e-12 relative slack).
bool is_stable_block(std::span<const double> b, int lo, int hi);

/// Resolves instantaneous clustering of particles sharing a start position:
/// adjacent same-position clusters merge while the left one is strictly
/// faster. Throws std::invalid_argument on unsorted y0 or a size mismatch.
StickyState initial_clusters(std::span<const double> y0, std::span<const double> b);

/// Integrates the state up to t_target, returning the collisions crossed.
std::vector<StickyEvent> advance(StickyState& state, std::span<const double> b, double t_target);

class StickyPath {
public:
    /// Solves the dynamics from sorted y0 up to `horizon` (all collisions
    /// when infinite).
    static StickyPath solve(std::span<const double> y0, std::span<const double> b,
                            double horizon = std::numeric_limits<double>::infinity());

    const std::vector<StickyEvent>& events() const { return events_; }

    /// segments()[m] is the state right after the m-th collision (m = 0 is
    /// the initial state); it governs [t^m, t^{m+1}).
    const std::vector<StickyState>& segments() const { return segments_; }

    const std::vector<double>& rank_velocities() const { return b_; }

    const StickyState& segment_at(double t) const;
    std::vector<double> position(double t) const;

    /// {"initial": [...], "rank_velocities": [...], "events": [...],
    ///  "segments": [...]} as JSON text.
    std::string to_json() const;

private:
    std::vector<double> y0_;
    std::vector<double> b_;
    std::vector<StickyEvent> events_;
    std::vector<StickyState> segments_;
};

Trajectory sticky_path(std::span<const double> y0, std::span<const double> b, std::span<const double> grid);

struct ReflectionRates {
    std::vector<double> kappa_rate;  // v_i - b_i
    std::vector<double> gamma;       // n + 1 entries
    double ell = 0.0;                // sum |v_i - b_i|
};

/// Throws std::invalid_argument when t is within 1e-12 of a collision time.
ReflectionRates reflection_decomposition(const StickyPath& path, double t);

/// Restarting from the state at `delta` reproduces the remaining path.
bool check_flow_property(std::span<const double> y0, std::span<const double> b, double delta, double horizon,
                         int samples = 101);

/// L1 distance between two solutions never exceeds the initial distance.
bool check_contractivity(std::span<const double> y0, std::span<const double> y0_other, std::span<const double> b,
                         std::span<const double> grid);

}  // namespace oflab
