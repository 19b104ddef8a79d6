#include "oflab/harness/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "oflab/trajectory.hpp"

namespace oflab::harness {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string fixed(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    (void)ec;
    std::string s(buf, ptr);
    return s == "-0.00" ? "0.00" : s;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;

    double map(double v) const { return log ? std::log10(v) : v; }
    bool drawable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }

    void fit(const std::vector<double>& values) {
        double a = std::numeric_limits<double>::infinity();
        double b = -a;
        for (double v : values) {
            if (!drawable(v)) continue;
            a = std::min(a, map(v));
            b = std::max(b, map(v));
        }
        if (!std::isfinite(a)) {
            lo = 0.0;
            hi = 1.0;
            return;
        }
        if (log) {
            lo = std::floor(a);
            hi = std::ceil(b);
            if (hi <= lo) hi = lo + 1.0;
            return;
        }
        if (b - a < 1e-12 * std::max(1.0, std::abs(a))) {
            a -= 0.5;
            b += 0.5;
        }
        const double pad = 0.05 * (b - a);
        lo = a - pad;
        hi = b + pad;
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            for (double e = lo; e <= hi + 1e-9; e += 1.0) out.push_back(e);
            return out;
        }
        const double raw = (hi - lo) / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0}) {
            if (m * mag >= raw) {
                step = m * mag;
                break;
            }
        }
        for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
            out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
        }
        return out;
    }

    std::string label(double t) const { return log ? "1e" + format_number(t) : format_number(t); }
};

}  // namespace

std::string render_svg(const Plot& plot) {
    Axis ax{plot.log_x};
    Axis ay{plot.log_y};
    std::vector<double> all_x;
    std::vector<double> all_y;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
            if (ax.drawable(s.xs[i]) && ay.drawable(s.ys[i])) {
                all_x.push_back(s.xs[i]);
                all_y.push_back(s.ys[i]);
            }
        }
    }
    ax.fit(all_x);
    ay.fit(all_y);

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (ax.map(x) - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto py = [&](double y) { return kTop + ph - (ay.map(y) - ay.lo) / (ay.hi - ay.lo) * ph; };
    auto tx = [&](double t) { return kLeft + (t - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto ty = [&](double t) { return kTop + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) + "\" height=\"" + fixed(kHeight) +
           "\" viewBox=\"0 0 " + fixed(kWidth) + " " + fixed(kHeight) + "\" font-family=\"sans-serif\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fixed(kWidth / 2) + "\" y=\"22.00\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(plot.title) + "</text>\n";

    for (double t : ax.ticks()) {
        const std::string x = fixed(tx(t));
        svg += "<line x1=\"" + x + "\" y1=\"" + fixed(kTop) + "\" x2=\"" + x + "\" y2=\"" + fixed(kTop + ph) +
               "\" stroke=\"#e0e0e0\"/>\n";
        svg += "<text x=\"" + x + "\" y=\"" + fixed(kTop + ph + 18) + "\" text-anchor=\"middle\" font-size=\"11\">" +
               escape(ax.label(t)) + "</text>\n";
    }
    for (double t : ay.ticks()) {
        const std::string y = fixed(ty(t));
        svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + y + "\" x2=\"" + fixed(kLeft + pw) + "\" y2=\"" + y +
               "\" stroke=\"#e0e0e0\"/>\n";
        svg += "<text x=\"" + fixed(kLeft - 6) + "\" y=\"" + fixed(ty(t) + 4) +
               "\" text-anchor=\"end\" font-size=\"11\">" + escape(ay.label(t)) + "</text>\n";
    }
    svg += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(pw) + "\" height=\"" +
           fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(kLeft + pw / 2) + "\" y=\"" + fixed(kHeight - 12) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + escape(plot.x_label) + "</text>\n";
    svg += "<text x=\"16.00\" y=\"" + fixed(kTop + ph / 2) + "\" text-anchor=\"middle\" font-size=\"12\" " +
           "transform=\"rotate(-90 16.00 " + fixed(kTop + ph / 2) + ")\">" + escape(plot.y_label) + "</text>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const std::string color = kColors[k % std::size(kColors)];
        std::string pts;
        std::string marks;
        for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
            if (!ax.drawable(s.xs[i]) || !ay.drawable(s.ys[i])) continue;
            const std::string x = fixed(px(s.xs[i]));
            const std::string y = fixed(py(s.ys[i]));
            if (!pts.empty()) pts += ' ';
            pts += x + "," + y;
            if (!s.line) {
                marks += "<circle cx=\"" + x + "\" cy=\"" + y + "\" r=\"3.00\" fill=\"" + color + "\"/>\n";
            }
        }
        if (s.line && !pts.empty()) {
            svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.50\" points=\"" + pts + "\"/>\n";
        }
        svg += marks;
        const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
        svg += "<line x1=\"" + fixed(kLeft + pw + 12) + "\" y1=\"" + fixed(ly - 4) + "\" x2=\"" +
               fixed(kLeft + pw + 32) + "\" y2=\"" + fixed(ly - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"2.00\"/>\n";
        svg += "<text x=\"" + fixed(kLeft + pw + 36) + "\" y=\"" + fixed(ly) + "\" font-size=\"11\">" +
               escape(s.name) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_plot(const Plot& plot, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << render_svg(plot);
}

}  // namespace oflab::harness
