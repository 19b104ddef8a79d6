#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <iostream>
#include <sstream>

#include "oflab/harness/config.hpp"
#include "oflab/harness/drift_io.hpp"
#include "oflab/harness/experiments.hpp"
#include "oflab/harness/report.hpp"
#include "oflab/sde.hpp"
#include "oflab/sticky.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kMetricFailure = 1;
constexpr int kConfigError = 2;

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (item.empty() || used != item.size()) {
            throw oflab::harness::ConfigError("", what + ": cannot read \"" + item + "\" as a number");
        }
        out.push_back(v);
    }
    if (out.empty()) throw oflab::harness::ConfigError("", what + ": empty list");
    return out;
}

int run_experiment(const std::string& path, const std::string& output_dir, bool quiet) {
    auto cfg = oflab::harness::load_config(path);
    oflab::harness::apply_env_overrides(cfg);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    const auto report = oflab::harness::run(cfg);
    oflab::harness::write_report(report, cfg.output_dir);
    if (!quiet) std::cout << oflab::harness::summary_text(report);
    std::cout << (report.passed() ? "PASS " : "FAIL ") << cfg.experiment << " -> " << cfg.output_dir.string()
              << "\n";
    return report.passed() ? kPass : kMetricFailure;
}

int check_stability(const std::string& path) {
    const auto spec = oflab::harness::load_drift_file(path);
    const auto sc = oflab::check_sc(spec);
    const auto ssc = oflab::check_ssc(spec);
    std::cout << "n " << spec.n() << "\n";
    std::cout << "SC " << (sc.satisfies_sc ? "holds" : "fails") << "\n";
    std::cout << "SSC " << (ssc.satisfies_ssc ? "holds" : "fails") << "\n";
    std::cout << "b_bar " << oflab::format_number(ssc.b_bar) << "\n";
    for (const auto& v : sc.violations) {
        std::cout << "violation sigma=" << v.sigma.to_string() << " split=" << v.split
                  << " left_avg=" << oflab::format_number(v.left_avg)
                  << " right_avg=" << oflab::format_number(v.right_avg) << "\n";
    }
    return sc.satisfies_sc ? kPass : kMetricFailure;
}

int solve_sticky(const std::string& y0_text, const std::string& b_text, double horizon, double dt, bool json) {
    const auto y0 = parse_list(y0_text, "y0");
    const auto b = parse_list(b_text, "b");
    if (y0.size() != b.size()) throw oflab::harness::ConfigError("", "y0 and b differ in length");
    if (!std::is_sorted(y0.begin(), y0.end())) throw oflab::harness::ConfigError("", "y0 must be nondecreasing");
    if (!(horizon > 0.0) || !(dt > 0.0)) throw oflab::harness::ConfigError("", "--T and --dt must be positive");
    if (json) {
        std::cout << oflab::StickyPath::solve(y0, b, horizon).to_json() << "\n";
        return kPass;
    }
    const auto grid = oflab::make_grid(horizon, dt);
    std::vector<double> times(grid.steps + 1);
    for (std::uint64_t k = 0; k <= grid.steps; ++k) times[k] = grid.time(k);
    std::cout << oflab::trajectory_csv(oflab::sticky_path(y0, b, times));
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Order-based diffusions: small-noise experiments and sticky dynamics"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run an experiment config and write its report");
    std::string config_path;
    std::string output_dir;
    bool quiet = false;
    run->add_option("config", config_path, "experiment JSON")->required();
    run->add_option("--output-dir", output_dir, "override the config's output_dir");
    run->add_flag("-q,--quiet", quiet, "print only the verdict line");

    auto* check = app.add_subcommand("check-sc", "check the stability conditions of a drift file");
    std::string drift_path;
    check->add_option("drift", drift_path, "drift JSON")->required();

    auto* sticky = app.add_subcommand("sticky", "solve sticky particle dynamics");
    std::string y0_text;
    std::string b_text;
    double horizon = 1.0;
    double dt = 1e-2;
    bool json = false;
    sticky->add_option("y0", y0_text, "sorted start positions, comma separated")->required();
    sticky->add_option("b", b_text, "rank velocities, comma separated")->required();
    sticky->add_option("--T", horizon, "horizon");
    sticky->add_option("--dt", dt, "output grid step");
    sticky->add_flag("--json", json, "print collision events and segments instead of the CSV path");

    auto* list = app.add_subcommand("list-experiments", "list registered experiments");

    auto* defaults = app.add_subcommand("defaults", "print the default config of an experiment");
    std::string name;
    defaults->add_option("experiment", name, "experiment name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*run) return run_experiment(config_path, output_dir, quiet);
        if (*check) return check_stability(drift_path);
        if (*sticky) return solve_sticky(y0_text, b_text, horizon, dt, json);
        if (*list) {
            for (const auto& e : oflab::harness::experiments()) std::cout << e.name << "  " << e.summary << "\n";
            return kPass;
        }
        if (*defaults) {
            std::cout << oflab::harness::config_to_json(oflab::harness::default_config(name)).dump(2) << "\n";
            return kPass;
        }
    } catch (const oflab::harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kPass;
}
