#include "oflab/trajectory.hpp"

#include <charconv>
#include <cmath>

namespace oflab {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    for (int i = 1; i <= traj.n; ++i) out += ",x" + std::to_string(i);
    out += '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out += format_number(traj.times[k]);
        for (double x : traj.state(k)) {
            out += ',';
            out += format_number(x);
        }
        out += '\n';
    }
    return out;
}

}  // namespace oflab
