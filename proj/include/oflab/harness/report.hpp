#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace oflab::harness {

enum class Comparator { within, at_most, less_than, at_least, greater_than, holds, diagnostic };

std::string to_string(Comparator c);

struct MetricRow {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    Comparator comparator = Comparator::diagnostic;
    bool pass = true;

    bool gated() const { return comparator != Comparator::diagnostic; }
};

/// |value - target| <= tolerance.
MetricRow within(std::string name, double value, double target, double tolerance);
/// value <= bound.
MetricRow at_most(std::string name, double value, double bound);
/// value < bound.
MetricRow less_than(std::string name, double value, double bound);
/// value >= bound.
MetricRow at_least(std::string name, double value, double bound);
/// value > bound.
MetricRow greater_than(std::string name, double value, double bound);
/// Boolean check, reported as value 1 or 0.
MetricRow holds(std::string name, bool ok);
/// Reported value without a verdict.
MetricRow diagnostic(std::string name, double value);

struct Artifact {
    std::string name;  // file name relative to the output directory
    std::string content;
};

struct Report {
    std::string experiment;
    nlohmann::json config = nlohmann::json::object();
    std::vector<MetricRow> rows;
    std::vector<Artifact> artifacts;
    std::vector<std::string> notes;

    bool passed() const;
    const MetricRow* find(const std::string& name) const;
    void add(MetricRow row) { rows.push_back(std::move(row)); }
    void attach(std::string name, std::string content) { artifacts.push_back({std::move(name), std::move(content)}); }
};

nlohmann::json report_to_json(const Report& report);

/// Writes every artifact plus report.json into `dir` (created if needed).
void write_report(const Report& report, const std::filesystem::path& dir);

/// One line per metric: "PASS name value (comparator target tolerance)".
std::string summary_text(const Report& report);

}  // namespace oflab::harness
