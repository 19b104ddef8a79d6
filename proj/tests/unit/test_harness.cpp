#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "oflab/harness/config.hpp"
#include "oflab/harness/csv.hpp"
#include "oflab/harness/drift_io.hpp"
#include "oflab/harness/experiments.hpp"
#include "oflab/harness/report.hpp"
#include "oflab/harness/svg.hpp"

using nlohmann::json;
using oflab::Permutation;
namespace h = oflab::harness;

namespace {

std::string error_pointer(const json& j) {
    try {
        h::parse_config(j);
    } catch (const h::ConfigError& e) {
        return e.where();
    }
    return "<none>";
}

std::string drift_error_pointer(const json& j) {
    try {
        h::drift_from_json(j);
    } catch (const h::ConfigError& e) {
        return e.where();
    }
    return "<none>";
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config errors point at the offending field") {
    CHECK(error_pointer({{"experiment", "aggregation"}}) == "<none>");
    CHECK(error_pointer({{"experiment", "nope"}}) == "/experiment");
    CHECK(error_pointer(json::object()) == "/experiment");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"colour", 1}}) == "/colour");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"eps_ladder", {1e-2, 1e-1}}}) == "/eps_ladder/1");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"eps_ladder", {1e-2, -1}}}) == "/eps_ladder/1");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"eps_ladder", json::array()}}) == "/eps_ladder");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"T", -1}}) == "/T");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"dt", 5}}) == "/dt");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"paths", 0}}) == "/paths");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"paths", 1.5}}) == "/paths");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"x0", {0, 0}}}) == "/x0");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"params", {{"bogus", 1}}}}) == "/params/bogus");
    CHECK(error_pointer({{"experiment", "laplace"}, {"params", {{"alpha", "one"}}}}) == "/params/alpha");
    CHECK(error_pointer({{"experiment", "aggregation"}, {"drift", {{"kind", "rank_based"}, {"b", {1, "x"}}}}}) ==
          "/drift/b/1");
    CHECK(error_pointer({{"experiment", "aggregation"},
                         {"drift", {{"kind", "rank_based"}, {"b", {1, 0, -1}}}},
                         {"drift_file", "d.json"}}) == "/drift_file");
}

TEST_CASE("config overrides and accessors") {
    const auto cfg = h::parse_config({{"experiment", "laplace"}, {"seed", 9}, {"params", {{"alpha", 2.0}}}});
    CHECK(cfg.seed == 9);
    CHECK(h::param_number(cfg, "alpha") == 2.0);
    CHECK(h::param_number(cfg, "tolerance") == 0.01);
    CHECK_THROWS_AS(h::param_number(cfg, "missing"), h::ConfigError);
    const auto coin = h::default_config("coincidence");
    CHECK(h::param_numbers(coin, "deltas").size() == 3);

    auto ratio = h::default_config("rank-sticky");
    CHECK(ratio.step_for(1e-2) == 1e-3);
    CHECK(ratio.step_for(1e-4) == doctest::Approx(1e-5));

    setenv("OFLAB_SEED", "77", 1);
    auto env = h::default_config("aggregation");
    h::apply_env_overrides(env);
    CHECK(env.seed == 77);
    setenv("OFLAB_SEED", "-3", 1);
    CHECK_THROWS_AS(h::apply_env_overrides(env), h::ConfigError);
    unsetenv("OFLAB_SEED");

    const auto echoed = h::parse_config(h::config_to_json(cfg));
    CHECK(h::config_to_json(echoed) == h::config_to_json(cfg));
    CHECK_THROWS_AS(h::default_config("nope"), h::ConfigError);
}

TEST_CASE("shipped configs load") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(OFLAB_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(h::load_config(entry.path()));
        ++count;
    }
    CHECK(count == 12);
}

TEST_CASE("drift files resolve relative to the config") {
    const auto dir = std::filesystem::temp_directory_path() / "oflab_harness_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "drift.json") << R"({"kind": "rank_based", "b": [2, 1, -1, -2]})";
    std::ofstream(dir / "cfg.json") << R"({"experiment": "rank-sticky", "drift_file": "drift.json", "x0": [0, 0, 0, 0]})";
    const auto cfg = h::load_config(dir / "cfg.json");
    REQUIRE(cfg.drift);
    CHECK(cfg.drift->n() == 4);
    std::ofstream(dir / "broken.json") << "{\"experiment\": ";
    CHECK_THROWS_AS(h::load_config(dir / "broken.json"), h::ConfigError);
    CHECK_THROWS_AS(h::load_config(dir / "absent.json"), h::ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("drift json") {
    const auto rank = oflab::DriftSpec::rank_based({2, 1, -1});
    const auto back = h::drift_from_json(h::drift_to_json(rank));
    const auto general = h::counterexample_drift({-0.5, 1, -1}, {2, -1, 1});
    const auto general_back = h::drift_from_json(h::drift_to_json(general));
    for (const auto& s : oflab::all_permutations(3)) {
        CHECK(back.velocity(s) == rank.velocity(s));
        CHECK(general_back.velocity(s) == general.velocity(s));
    }
    CHECK(drift_error_pointer({{"kind", "rank_based"}}) == "/b");
    CHECK(drift_error_pointer({{"kind", "odd"}}) == "/kind");
    CHECK(drift_error_pointer({{"kind", "general"}, {"n", 8}, {"table", json::object()}}) == "/n");
    CHECK(drift_error_pointer({{"kind", "general"}, {"n", 2}, {"table", {{"12", {1, 0}}}}}) == "/table");
    CHECK(drift_error_pointer({{"kind", "general"}, {"n", 2}, {"table", {{"12", {1, 0}}, {"21", {1}}}}}) ==
          "/table/21");
    CHECK(drift_error_pointer({{"kind", "rank_based"}, {"b", {1}}, {"extra", 0}}) == "/extra");
}

TEST_CASE("counterexample family") {
    const std::vector<double> lambda{-0.5, 1, -1};
    const std::vector<double> eta{2, -1, 1};
    const auto spec = h::counterexample_drift(lambda, eta);
    CHECK(spec.velocity(Permutation({1, 2, 3})) == lambda);
    CHECK(spec.velocity(Permutation({1, 3, 2})) == eta);
    CHECK(spec.velocity(Permutation({2, 1, 3})) == std::vector<double>{0, 1, -1});
    CHECK(spec.velocity(Permutation({3, 2, 1})) == std::vector<double>{-1, 0, 1});
    CHECK(h::counterexample_rho(lambda, eta) == 0.5);
    CHECK_FALSE(oflab::check_sc(spec).satisfies_sc);
    CHECK_THROWS_AS(h::counterexample_rho({0, -1, 1}, eta), std::invalid_argument);
}

TEST_CASE("csv") {
    h::CsvTable t({"a", "b", "c"});
    t.add_row({0.1, 3LL, std::string("x")});
    t.add_row({1e-300, -2LL, std::string("y")});
    CHECK(t.size() == 2);
    CHECK(t.str() == "a,b,c\n0.1,3,x\n1e-300,-2,y\n");
    CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("svg") {
    h::Plot p;
    p.title = "t";
    p.series.push_back({"s", {0.0, 1.0}, {0.0, 1.0}, true});
    const auto a = h::render_svg(p);
    CHECK(a == h::render_svg(p));
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
    h::Plot empty;
    CHECK(h::render_svg(empty).find("</svg>") != std::string::npos);
    h::Plot logs;
    logs.log_x = true;
    logs.series.push_back({"s", {-1.0, 0.0, 1.0, 10.0}, {1.0, 2.0, NAN, 4.0}, false});
    CHECK(h::render_svg(logs).find("nan") == std::string::npos);
}

TEST_CASE("reports") {
    h::Report r;
    r.add(h::within("a", 1.0, 1.02, 0.05));
    r.add(h::diagnostic("d", 7.0));
    CHECK(r.passed());
    r.add(h::less_than("b", 1.0, 1.0));
    CHECK_FALSE(r.passed());
    CHECK(h::at_most("c", 1.0, 1.0).pass);
    CHECK(h::greater_than("g", 1.0, 1.0).pass == false);
    CHECK(h::at_least("g", 1.0, 1.0).pass);
    CHECK(h::holds("h", false).value == 0.0);
    REQUIRE(r.find("d"));
    CHECK(r.find("zzz") == nullptr);
    CHECK(h::summary_text(r).find("FAIL b") != std::string::npos);
    CHECK(h::report_to_json(r)["passed"] == false);
}

TEST_CASE("experiment runs are deterministic") {
    CHECK(h::experiments().size() == 12);
    for (const auto& e : h::experiments()) {
        CHECK(h::find_experiment(e.name) == &e);
        CHECK_NOTHROW(h::validate_config(h::default_config(e.name)));
    }
    auto cfg = h::parse_config({{"experiment", "aggregation"}, {"paths", 16}, {"T", 0.2}, {"dt", 1e-3}});
    const auto a = h::report_to_json(h::run(cfg));
    const auto b = h::report_to_json(h::run(cfg));
    CHECK(a == b);
    CHECK(a["experiment"] == "aggregation");
    cfg.seed = 2;
    CHECK(h::report_to_json(h::run(cfg)) != a);

    const auto dir = std::filesystem::temp_directory_path() / "oflab_report_test";
    h::write_report(h::run(cfg), dir);
    CHECK(std::filesystem::exists(dir / "report.json"));
    std::filesystem::remove_all(dir);
}

}
