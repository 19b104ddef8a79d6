#include "oflab/harness/drift_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace oflab::harness {

using nlohmann::json;

namespace {

std::vector<double> number_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(where + "/" + std::to_string(i), "expected a number");
        out.push_back(j[i].get<double>());
    }
    return out;
}

}  // namespace

DriftSpec drift_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where, "drift must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key != "kind" && key != "b" && key != "n" && key != "table") {
            throw ConfigError(where + "/" + key, "unknown drift field");
        }
    }
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError(where + "/kind", "missing drift kind");
    const auto kind = j["kind"].get<std::string>();

    if (kind == "rank_based") {
        if (!j.contains("b")) throw ConfigError(where + "/b", "rank_based drift needs a rank vector");
        auto b = number_array(j["b"], where + "/b");
        if (b.empty()) throw ConfigError(where + "/b", "rank vector is empty");
        if (j.contains("n") && j["n"] != json(b.size())) throw ConfigError(where + "/n", "n does not match b");
        try {
            return DriftSpec::rank_based(std::move(b));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + "/b", e.what());
        }
    }
    if (kind != "general") throw ConfigError(where + "/kind", "kind must be \"general\" or \"rank_based\"");

    if (!j.contains("n") || !j["n"].is_number_integer()) throw ConfigError(where + "/n", "general drift needs n");
    const int n = j["n"].get<int>();
    if (n < 1) throw ConfigError(where + "/n", "n must be positive");
    if (n > kMaxGeneralN) {
        throw ConfigError(where + "/n", "general drift tables are limited to n <= " + std::to_string(kMaxGeneralN) +
                                            "; use the rank_based form");
    }
    if (!j.contains("table") || !j["table"].is_object()) {
        throw ConfigError(where + "/table", "general drift needs a table object");
    }
    std::map<Permutation, std::vector<double>> table;
    for (const auto& [key, value] : j["table"].items()) {
        const std::string at = where + "/table/" + key;
        Permutation sigma;
        try {
            sigma = Permutation::parse(key);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(at, e.what());
        }
        if (sigma.size() != n) throw ConfigError(at, "permutation size does not match n");
        auto v = number_array(value, at);
        if (v.size() != static_cast<std::size_t>(n)) throw ConfigError(at, "velocity vector must have n entries");
        table.emplace(sigma, std::move(v));
    }
    if (table.size() != factorial(n)) {
        for (const auto& sigma : all_permutations(n)) {
            if (!table.count(sigma)) {
                throw ConfigError(where + "/table", "table is incomplete: missing " + sigma.to_string());
            }
        }
    }
    try {
        return DriftSpec::from_table(table);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + "/table", e.what());
    }
}

json drift_to_json(const DriftSpec& spec) {
    json j;
    if (spec.is_rank_based()) {
        j["kind"] = "rank_based";
        j["b"] = spec.rank_vector();
        return j;
    }
    j["kind"] = "general";
    j["n"] = spec.n();
    j["table"] = json::object();
    for (const auto& sigma : all_permutations(spec.n())) j["table"][sigma.to_string()] = spec.velocity(sigma);
    return j;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("", path.string() + ": " + e.what());
    }
}

DriftSpec load_drift_file(const std::filesystem::path& path) { return drift_from_json(read_json_file(path)); }

}  // namespace oflab::harness
