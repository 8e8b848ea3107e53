// Experiment runner: velocity curves, propagation heatmaps, WKB expansions,
// scaling sweeps, and geometric-control tables, from JSON configs with flat
// key=value overrides. Outputs are deterministic: identical configs produce
// byte-identical CSV/JSON files.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fswkb/fswkb.hpp"

namespace {

fswkb::json parse_override_value(const std::string& raw) {
    // numbers, booleans, arrays and objects parse as JSON; anything else is a string
    try {
        return fswkb::json::parse(raw);
    } catch (const fswkb::json::parse_error&) {
        return fswkb::json(raw);
    }
}

fswkb::json overrides_from(const std::vector<std::string>& sets) {
    fswkb::json out = fswkb::json::object();
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw fswkb::validation_error("--set expects key=value, got '" + kv + "'");
        out[kv.substr(0, eq)] = parse_override_value(kv.substr(eq + 1));
    }
    return out;
}

int run_kind(const std::string& kind, const std::string& config_path, const std::vector<std::string>& sets,
             const std::string& out_dir, int jobs, std::uint64_t seed, bool dump_config) {
    fswkb::json file_config = fswkb::json::object();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config file '" << config_path << "'\n";
            return 2;
        }
        try {
            in >> file_config;
        } catch (const fswkb::json::parse_error& e) {
            std::cerr << "error: config parse failure: " << e.what() << "\n";
            return 2;
        }
    }
    try {
        const fswkb::json ov = overrides_from(sets);
        const auto spec = fswkb::experiments::make_spec(kind, file_config, ov, out_dir, jobs, seed);
        if (dump_config) {
            std::cout << spec.params.dump(2) << "\n";
            return 0;
        }
        return fswkb::experiments::run_experiment(spec);
    } catch (const fswkb::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const fswkb::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fswkb: fractional Schrodinger WKB toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir = "out";
    int jobs = 1;
    std::uint64_t seed = 0;
    bool dump_config = false;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--set", sets, "flat key=value override (repeatable)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker count for independent panels / sweep points");
    app.add_option("--seed", seed, "seed recorded for randomized test data");
    app.add_flag("--dump-config", dump_config, "print the merged config and exit");

    for (const std::string kind : {"simulate", "wkb", "rays", "sweep", "gcc", "figures"}) {
        auto* sub = app.add_subcommand(kind, "run the '" + kind + "' experiment");
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);
    const std::string kind = app.get_subcommands().front()->get_name();
    return run_kind(kind, config_path, sets, out_dir, jobs, seed, dump_config);
}
