#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pluri/max_principle.hpp"
#include "pluri/objective.hpp"
#include "pluri/perron.hpp"
#include "pluri/search.hpp"
#include "pluri/thinness.hpp"

namespace pluri {

// Scenario files are JSON; numeric outputs are CSV with a "# schema=1"
// header.  Exit codes: 0 pass, 1 sandwich/verdict violation, 2 schema error,
// 3 engine error.
enum ExitCode { exit_pass = 0, exit_violation = 1, exit_schema = 2, exit_engine = 3 };

class schema_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EngineChoice { disc, perron, both };

struct Scenario {
    std::string name;
    int n = 1;
    std::uint64_t seed = 1;
    std::string mode;  // envelope | thinness | max_principle

    std::optional<Domain> X, W, U;
    std::string phi1, phi2;
    std::optional<std::string> boundary_values;
    bool restricted_to_classes = false;  // F (class-restricted) instead of EH

    SearchConfig search;
    RelaxConfig relax;
    std::optional<GridSpec> grid;
    std::vector<Point> probes;

    // thinness extras
    double V_radius = 0.5;
    double epsilon = 0.01;
    std::vector<double> rho_schedule;
    std::vector<Point> cloud;
    std::optional<std::string> expected_verdict;

    // envelope sandwich tolerance
    double sandwich_tol = 0.02;
};

Scenario load_scenario(const std::string& path);  // throws schema_error
Domain domain_from_json_text(const std::string& text, int n);

int cmd_envelope(const Scenario& s, EngineChoice engine, const std::string& out_dir);
int cmd_thinness(const Scenario& s, const std::string& out_dir);
int cmd_max_principle(const Scenario& s, const std::string& out_dir);

// Dispatch on scenario mode; catches schema/engine errors into exit codes.
int run_scenario_file(const std::string& path, const std::string& out_dir,
                      std::optional<std::uint64_t> seed_override);

// Runs every *.json scenario under dir (sorted by filename) with up to jobs
// workers; writes summary.csv in out_dir; returns 0 iff all scenarios pass.
int cmd_suite(const std::string& dir, const std::string& out_dir, int jobs,
              std::optional<std::uint64_t> seed_override);

}  // namespace pluri
