#pragma once

#include <filesystem>
#include <json.hpp>
#include <stdexcept>
#include <string>

#include "oflab/drift.hpp"

namespace oflab::harness {

/// Invalid user input; `where` is a JSON pointer into the offending document.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& where, const std::string& what)
        : std::runtime_error((where.empty() ? std::string("/") : where) + ": " + what), where_(where) {}

    const std::string& where() const { return where_; }

private:
    std::string where_;
};

/// General specs are stored as full tables and capped at this size.
inline constexpr int kMaxGeneralN = 7;

/// Accepts {"kind": "rank_based", "b": [...]} or
/// {"n": 3, "kind": "general", "table": {"123": [...], ...}}.
DriftSpec drift_from_json(const nlohmann::json& j, const std::string& where = "");

nlohmann::json drift_to_json(const DriftSpec& spec);

DriftSpec load_drift_file(const std::filesystem::path& path);

/// Reads a JSON document, reporting parse errors as ConfigError.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace oflab::harness
