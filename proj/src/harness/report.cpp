#include "oflab/harness/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "oflab/trajectory.hpp"

namespace oflab::harness {

std::string to_string(Comparator c) {
    switch (c) {
        case Comparator::within: return "within";
        case Comparator::at_most: return "at_most";
        case Comparator::less_than: return "less_than";
        case Comparator::at_least: return "at_least";
        case Comparator::greater_than: return "greater_than";
        case Comparator::holds: return "holds";
        case Comparator::diagnostic: return "diagnostic";
    }
    return "?";
}

MetricRow within(std::string name, double value, double target, double tolerance) {
    return {std::move(name), value, target, tolerance, Comparator::within, std::abs(value - target) <= tolerance};
}

MetricRow at_most(std::string name, double value, double bound) {
    return {std::move(name), value, bound, 0.0, Comparator::at_most, value <= bound};
}

MetricRow less_than(std::string name, double value, double bound) {
    return {std::move(name), value, bound, 0.0, Comparator::less_than, value < bound};
}

MetricRow at_least(std::string name, double value, double bound) {
    return {std::move(name), value, bound, 0.0, Comparator::at_least, value >= bound};
}

MetricRow greater_than(std::string name, double value, double bound) {
    return {std::move(name), value, bound, 0.0, Comparator::greater_than, value > bound};
}

MetricRow holds(std::string name, bool ok) {
    return {std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, Comparator::holds, ok};
}

MetricRow diagnostic(std::string name, double value) {
    return {std::move(name), value, 0.0, 0.0, Comparator::diagnostic, true};
}

bool Report::passed() const {
    for (const auto& r : rows) {
        if (r.gated() && !r.pass) return false;
    }
    return true;
}

const MetricRow* Report::find(const std::string& name) const {
    for (const auto& r : rows) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

nlohmann::json report_to_json(const Report& report) {
    using nlohmann::json;
    json j;
    j["experiment"] = report.experiment;
    j["config"] = report.config;
    j["passed"] = report.passed();
    j["metrics"] = json::array();
    for (const auto& r : report.rows) {
        json m;
        m["name"] = r.name;
        m["value"] = r.value;
        m["comparator"] = to_string(r.comparator);
        if (r.gated()) {
            m["target"] = r.target;
            m["tolerance"] = r.tolerance;
            m["pass"] = r.pass;
        }
        j["metrics"].push_back(m);
    }
    j["artifacts"] = json::array();
    for (const auto& a : report.artifacts) j["artifacts"].push_back(a.name);
    j["artifacts"].push_back("report.json");
    j["notes"] = report.notes;
    return j;
}

void write_report(const Report& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        out << content;
    };
    for (const auto& a : report.artifacts) write(a.name, a.content);
    write("report.json", report_to_json(report).dump(2) + "\n");
}

std::string summary_text(const Report& report) {
    std::string out;
    for (const auto& r : report.rows) {
        out += r.gated() ? (r.pass ? "PASS " : "FAIL ") : "INFO ";
        out += r.name + " = " + format_number(r.value);
        if (r.gated() && r.comparator != Comparator::holds) {
            out += " (" + to_string(r.comparator) + " " + format_number(r.target);
            if (r.comparator == Comparator::within) out += " +/- " + format_number(r.tolerance);
            out += ")";
        }
        out += '\n';
    }
    for (const auto& n : report.notes) out += "NOTE " + n + '\n';
    return out;
}

}  // namespace oflab::harness
