#include "oflab/sticky.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <stdexcept>

namespace oflab {

namespace {

constexpr double kTimeTol = 1e-12;

double block_mean(std::span<const double> b, int lo, int hi) {
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += b[static_cast<std::size_t>(j - 1)];
    return s / (hi - lo + 1);
}

// Merges adjacent clusters sitting at the same position while the left one
// is strictly faster. Positions of clusters to be compared must already be
// exactly equal.
std::vector<Cluster> merge_fixpoint(const std::vector<Cluster>& in, std::span<const double> b,
                                    std::vector<std::pair<int, int>>* merged) {
    std::vector<Cluster> out;
    std::vector<bool> composite;
    for (const auto& c : in) {
        out.push_back(c);
        composite.push_back(false);
        while (out.size() >= 2) {
            auto& left = out[out.size() - 2];
            const auto& right = out.back();
            if (left.position != right.position || !(left.velocity > right.velocity)) break;
            left.hi = right.hi;
            left.velocity = block_mean(b, left.lo, left.hi);
            if (!is_stable_block(b, left.lo, left.hi)) {
                throw std::logic_error("merged cluster violates the stability property");
            }
            out.pop_back();
            composite.pop_back();
            composite.back() = true;
        }
    }
    if (merged) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            if (composite[k]) merged->emplace_back(out[k].lo, out[k].hi);
        }
    }
    return out;
}

struct NextCollision {
    double dt = std::numeric_limits<double>::infinity();
    std::vector<double> pair_dt;  // per adjacent pair, inf if diverging
};

NextCollision next_collision(const StickyState& s) {
    NextCollision nc;
    const auto m = s.clusters.size();
    nc.pair_dt.assign(m > 0 ? m - 1 : 0, std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const auto& a = s.clusters[k];
        const auto& c = s.clusters[k + 1];
        if (a.velocity > c.velocity) {
            const double gap = std::max(0.0, c.position - a.position);
            nc.pair_dt[k] = gap / (a.velocity - c.velocity);
            nc.dt = std::min(nc.dt, nc.pair_dt[k]);
        }
    }
    return nc;
}

void drift_to(StickyState& s, double t) {
    const double h = t - s.time;
    for (auto& c : s.clusters) c.position += c.velocity * h;
    s.time = t;
}

// Moves to the next collision time and merges everything colliding there.
StickyEvent collide(StickyState& s, std::span<const double> b, const NextCollision& nc) {
    const double t_star = s.time + nc.dt;
    const double tol = kTimeTol * std::max(1.0, t_star);
    drift_to(s, t_star);

    // Snap each chain of simultaneously colliding clusters to one position.
    auto& cl = s.clusters;
    std::size_t k = 0;
    while (k < cl.size()) {
        std::size_t end = k;
        while (end + 1 < cl.size() && nc.pair_dt[end] - nc.dt <= tol) ++end;
        if (end > k) {
            double mass = 0.0;
            double moment = 0.0;
            for (std::size_t j = k; j <= end; ++j) {
                mass += cl[j].mass();
                moment += cl[j].mass() * cl[j].position;
            }
            for (std::size_t j = k; j <= end; ++j) cl[j].position = moment / mass;
        }
        k = end + 1;
    }

    StickyEvent ev;
    ev.time = t_star;
    cl = merge_fixpoint(cl, b, &ev.merged);
    return ev;
}

void check_rank_vector(std::span<const double> y0, std::span<const double> b) {
    if (y0.size() != b.size()) throw std::invalid_argument("positions and velocities differ in length");
    if (y0.empty()) throw std::invalid_argument("sticky dynamics needs at least one particle");
    for (std::size_t i = 0; i < y0.size(); ++i) {
        if (!std::isfinite(y0[i]) || !std::isfinite(b[i])) throw std::invalid_argument("non-finite input");
        if (i > 0 && y0[i] < y0[i - 1]) throw std::invalid_argument("initial positions must be nondecreasing");
    }
}

}  // namespace

std::vector<double> StickyState::positions() const {
    std::vector<double> out;
    for (const auto& c : clusters) out.insert(out.end(), static_cast<std::size_t>(c.mass()), c.position);
    return out;
}

std::vector<double> StickyState::velocities() const {
    std::vector<double> out;
    for (const auto& c : clusters) out.insert(out.end(), static_cast<std::size_t>(c.mass()), c.velocity);
    return out;
}

double StickyState::momentum() const {
    double p = 0.0;
    for (const auto& c : clusters) p += c.mass() * c.velocity;
    return p;
}

bool is_stable_block(std::span<const double> b, int lo, int hi) {
    double total = 0.0;
    double scale = 1.0;
    for (int j = lo; j <= hi; ++j) {
        total += b[static_cast<std::size_t>(j - 1)];
        scale = std::max(scale, std::abs(b[static_cast<std::size_t>(j - 1)]));
    }
    double prefix = 0.0;
    for (int i = lo; i < hi; ++i) {
        prefix += b[static_cast<std::size_t>(i - 1)];
        const double left = prefix / (i - lo + 1);
        const double right = (total - prefix) / (hi - i);
        if (left < right - 1e-12 * scale) return false;
    }
    return true;
}

StickyState initial_clusters(std::span<const double> y0, std::span<const double> b) {
    check_rank_vector(y0, b);
    std::vector<Cluster> singles;
    for (std::size_t i = 0; i < y0.size(); ++i) {
        const int idx = static_cast<int>(i + 1);
        singles.push_back({idx, idx, y0[i], b[i]});
    }
    StickyState s;
    s.clusters = merge_fixpoint(singles, b, nullptr);
    return s;
}

std::vector<StickyEvent> advance(StickyState& state, std::span<const double> b, double t_target) {
    if (t_target < state.time) throw std::invalid_argument("cannot advance backwards in time");
    std::vector<StickyEvent> events;
    for (;;) {
        const auto nc = next_collision(state);
        if (!std::isfinite(nc.dt) || !(state.time + nc.dt <= t_target)) break;
        events.push_back(collide(state, b, nc));
    }
    drift_to(state, t_target);
    return events;
}

StickyPath StickyPath::solve(std::span<const double> y0, std::span<const double> b, double horizon) {
    StickyPath p;
    p.y0_.assign(y0.begin(), y0.end());
    p.b_.assign(b.begin(), b.end());
    StickyState s = initial_clusters(y0, b);
    p.segments_.push_back(s);
    for (;;) {
        const auto nc = next_collision(s);
        if (!std::isfinite(nc.dt) || !(s.time + nc.dt <= horizon)) break;
        p.events_.push_back(collide(s, b, nc));
        p.segments_.push_back(s);
    }
    return p;
}

const StickyState& StickyPath::segment_at(double t) const {
    std::size_t m = 0;
    while (m + 1 < segments_.size() && segments_[m + 1].time <= t) ++m;
    return segments_[m];
}

std::vector<double> StickyPath::position(double t) const {
    StickyState s = segment_at(t);
    drift_to(s, std::max(t, s.time));
    return s.positions();
}

std::string StickyPath::to_json() const {
    using nlohmann::json;
    json j;
    j["initial"] = y0_;
    j["rank_velocities"] = b_;
    j["events"] = json::array();
    for (const auto& ev : events_) {
        json e;
        e["time"] = ev.time;
        e["merged"] = json::array();
        for (const auto& [lo, hi] : ev.merged) e["merged"].push_back({lo, hi});
        j["events"].push_back(e);
    }
    j["segments"] = json::array();
    for (const auto& seg : segments_) {
        json s;
        s["start"] = seg.time;
        s["clusters"] = json::array();
        for (const auto& c : seg.clusters) {
            s["clusters"].push_back({{"lo", c.lo}, {"hi", c.hi}, {"position", c.position}, {"velocity", c.velocity}});
        }
        j["segments"].push_back(s);
    }
    return j.dump(2);
}

Trajectory sticky_path(std::span<const double> y0, std::span<const double> b, std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("empty time grid");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("time grid must be increasing");
    }
    if (grid.front() < 0.0) throw std::invalid_argument("time grid must start at or after 0");
    const auto path = StickyPath::solve(y0, b, grid.back());
    Trajectory traj;
    traj.n = static_cast<int>(y0.size());
    for (double t : grid) traj.push(t, path.position(t));
    return traj;
}

ReflectionRates reflection_decomposition(const StickyPath& path, double t) {
    for (const auto& ev : path.events()) {
        if (std::abs(ev.time - t) <= kTimeTol * std::max(1.0, t)) {
            throw std::invalid_argument("reflection rates are undefined at a collision time");
        }
    }
    const auto& seg = path.segment_at(t);
    const auto& b = path.rank_velocities();
    const auto n = b.size();
    ReflectionRates r;
    r.kappa_rate.resize(n);
    r.gamma.assign(n + 1, 0.0);
    const auto v = seg.velocities();
    for (std::size_t i = 0; i < n; ++i) {
        r.kappa_rate[i] = v[i] - b[i];
        r.ell += std::abs(r.kappa_rate[i]);
    }
    if (r.ell > 0.0) {
        for (const auto& c : seg.clusters) {
            for (int i = c.lo + 1; i <= c.hi; ++i) {
                double s = 0.0;
                for (int j = c.lo; j <= i - 1; ++j) s += b[static_cast<std::size_t>(j - 1)] - c.velocity;
                r.gamma[static_cast<std::size_t>(i - 1)] = s / r.ell;
            }
        }
    }

    const double scale = std::max(1.0, r.ell);
    for (std::size_t i = 0; i < n; ++i) {
        if (r.gamma[i] < -1e-12 * scale) throw std::logic_error("negative reflection weight");
        const double rebuilt = (r.gamma[i] - r.gamma[i + 1]) * r.ell;
        if (std::abs(rebuilt - r.kappa_rate[i]) > 1e-9 * scale) {
            throw std::logic_error("reflection weights do not reproduce the regulator rates");
        }
    }
    return r;
}

bool check_flow_property(std::span<const double> y0, std::span<const double> b, double delta, double horizon,
                         int samples) {
    if (!(delta >= 0.0) || !(horizon > delta)) throw std::invalid_argument("need 0 <= delta < horizon");
    const auto full = StickyPath::solve(y0, b, horizon);
    const auto mid = full.position(delta);
    const auto restarted = StickyPath::solve(mid, b, horizon - delta);
    for (int k = 0; k < samples; ++k) {
        const double s = (horizon - delta) * k / std::max(1, samples - 1);
        const auto a = full.position(delta + s);
        const auto c = restarted.position(s);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::abs(a[i] - c[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) return false;
        }
    }
    return true;
}

bool check_contractivity(std::span<const double> y0, std::span<const double> y0_other, std::span<const double> b,
                         std::span<const double> grid) {
    if (grid.empty()) return true;
    const double horizon = grid.back();
    const auto p = StickyPath::solve(y0, b, horizon);
    const auto q = StickyPath::solve(y0_other, b, horizon);
    double d0 = 0.0;
    for (std::size_t i = 0; i < y0.size(); ++i) d0 += std::abs(y0[i] - y0_other[i]);
    for (double t : grid) {
        const auto a = p.position(t);
        const auto c = q.position(t);
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - c[i]);
        if (d > d0 + 1e-12 * std::max(1.0, d0)) return false;
    }
    return true;
}

}  // namespace oflab
