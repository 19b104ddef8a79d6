#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace oflab::harness {

struct Series {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
    bool line = true;  // false draws markers only
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
};

/// Self-contained SVG; identical input gives identical bytes. Points that
/// cannot be drawn (non-finite, or non-positive on a log axis) are skipped.
std::string render_svg(const Plot& plot);

/// Writes render_svg(plot) to `path`.
void emit_plot(const Plot& plot, const std::filesystem::path& path);

}  // namespace oflab::harness
