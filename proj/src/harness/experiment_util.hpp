#pragma once

#include <string>
#include <vector>

#include "oflab/harness/config.hpp"
#include "oflab/rng.hpp"
#include "oflab/trajectory.hpp"

namespace oflab::harness::detail {

inline std::string at_eps(const std::string& name, double eps) { return name + "@eps=" + format_number(eps); }

/// The configured drift; `n` > 0 also pins its dimension.
inline const DriftSpec& require_drift(const ExperimentConfig& cfg, int n = 0) {
    if (!cfg.drift) throw ConfigError("/drift", "this experiment needs a drift");
    if (n > 0 && cfg.drift->n() != n) {
        throw ConfigError("/drift", "this experiment needs n = " + std::to_string(n) + ", got " +
                                        std::to_string(cfg.drift->n()));
    }
    return *cfg.drift;
}

inline std::vector<double> start_point(const ExperimentConfig& cfg, int n) {
    if (cfg.x0.empty()) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
    return cfg.x0;
}

/// Independent noise per ladder rung and per purpose within a rung.
inline std::uint64_t rung_seed(const ExperimentConfig& cfg, std::size_t rung, std::uint64_t purpose = 0) {
    return derive_seed(derive_seed(cfg.seed, rung), purpose);
}

inline bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

}  // namespace oflab::harness::detail
