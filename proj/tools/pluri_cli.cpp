#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pluri/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"disc-functional envelopes, thinness reports and maximum-principle suites"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "override every scenario seed");

    std::string scenario_path, out_dir = "out", engine_name = "both", suite_dir;
    int jobs = 1;

    CLI::App* env = app.add_subcommand("envelope", "compute envelope probes");
    env->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    env->add_option("--engine", engine_name, "disc|perron|both")
        ->check(CLI::IsMember({"disc", "perron", "both"}));
    env->add_option("--out", out_dir, "output directory");

    CLI::App* thin = app.add_subcommand("thinness", "thinness report for a scenario");
    thin->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    thin->add_option("--out", out_dir, "output directory");

    CLI::App* suite = app.add_subcommand("suite", "run every scenario in a directory");
    suite->add_option("--dir", suite_dir, "scenario directory")->required();
    suite->add_option("--jobs", jobs, "worker threads");
    suite->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    using namespace pluri;
    if (suite->parsed()) return cmd_suite(suite_dir, out_dir, jobs, seed);

    Scenario s;
    try {
        s = load_scenario(scenario_path);
    } catch (const schema_error& e) {
        std::fprintf(stderr, "schema error: %s: %s\n", scenario_path.c_str(), e.what());
        return exit_schema;
    }
    if (seed) {
        s.seed = *seed;
        s.search.seed = *seed;
        s.relax.seed = *seed;
    }
    try {
        if (env->parsed()) {
            const EngineChoice choice = engine_name == "disc"     ? EngineChoice::disc
                                        : engine_name == "perron" ? EngineChoice::perron
                                                                  : EngineChoice::both;
            return cmd_envelope(s, choice, out_dir);
        }
        return cmd_thinness(s, out_dir);
    } catch (const schema_error& e) {
        std::fprintf(stderr, "schema error: %s: %s\n", scenario_path.c_str(), e.what());
        return exit_schema;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "engine error: %s: %s\n", scenario_path.c_str(), e.what());
        return exit_engine;
    }
}
