#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace oflab {

/// Particle positions on a uniform time grid, stored row-major: row k holds
/// the n coordinates at times[k]. `increments` holds the standard normal
/// draws of each step (row k drives the move from k to k+1) when recorded.
struct Trajectory {
    int n = 0;
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> increments;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;

    std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }

    std::span<const double> state(std::size_t k) const {
        return {values.data() + k * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }
    std::span<double> state(std::size_t k) {
        return {values.data() + k * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }

    void push(double t, std::span<const double> x) {
        times.push_back(t);
        values.insert(values.end(), x.begin(), x.end());
    }
};

/// Scalar path on a uniform grid.
struct ScalarPath {
    std::vector<double> times;
    std::vector<double> values;
};

/// CSV with header "t,x1,...,xn".
std::string trajectory_csv(const Trajectory& traj);

/// Shortest round-trip decimal form of v, locale independent.
std::string format_number(double v);

}  // namespace oflab
