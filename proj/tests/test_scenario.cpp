#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pluri/scenario.hpp"

using namespace pluri;
namespace fs = std::filesystem;

namespace {

fs::path sandbox() {
    const fs::path p = fs::temp_directory_path() / "pluri_scenario_tests";
    fs::create_directories(p);
    return p;
}

fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = sandbox() / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ostringstream ss;
    ss << std::ifstream(p).rdbuf();
    return ss.str();
}

const char* kPaperScenario = R"json({
  "name": "paper_mini",
  "n": 1,
  "seed": 9,
  "mode": "envelope",
  "domains": {
    "X": {"kind": "ball", "center": [0, 0], "radius": 1},
    "W": {"kind": "ball", "center": [0, 0], "radius": 0.5}
  },
  "objective": {"phi1": "2", "phi2": "-1"},
  "search": {"degree_schedule": [1, 2], "restarts": 4, "max_evals": 300, "quadrature_m": 256},
  "relax": {"radii_steps": [1, 2, 4, 8, 16], "tol": 1e-5},
  "grid": {"axes": [{"lo": -1, "hi": 1, "res": 65}, {"lo": -1, "hi": 1, "res": 65}]},
  "probes": [[0.25, 0], [0.6, 0]]
})json";

const char* kSlitScenario = R"json({
  "name": "slit_thinness",
  "n": 1,
  "seed": 3,
  "mode": "thinness",
  "domains": {
    "U": {"kind": "slit_disc", "center": [0, 0], "radius": 1, "slit_a": [0, 0], "slit_b": [1, 0]}
  },
  "search": {"degree_schedule": [1, 2], "restarts": 4, "max_evals": 300},
  "relax": {"radii_steps": [1, 2, 4, 8, 16], "tol": 1e-5},
  "grid": {"axes": [{"lo": -0.2625, "hi": 0.2625, "res": 97},
                    {"lo": -0.2625, "hi": 0.2625, "res": 97}]},
  "probes": [[0, 0]],
  "thinness": {"V_radius": 0.5, "epsilon": 0.01, "expected_verdict": "NonThin(certified)"}
})json";

}  // namespace

TEST_CASE("envelope scenario runs both engines and passes the sandwich") {
    const fs::path file = write("paper_mini.json", kPaperScenario);
    const fs::path out = sandbox() / "paper_out";
    CHECK(run_scenario_file(file.string(), out.string(), std::nullopt) == exit_pass);
    CHECK(fs::exists(out / "disc_probes.csv"));
    CHECK(fs::exists(out / "perron_probes.csv"));
    CHECK(fs::exists(out / "sandwich.csv"));
    const std::string disc = slurp(out / "disc_probes.csv");
    CHECK(disc.rfind("# schema=1\n", 0) == 0);

    // byte-identical on rerun with the same seed
    const fs::path out2 = sandbox() / "paper_out2";
    CHECK(run_scenario_file(file.string(), out2.string(), std::nullopt) == exit_pass);
    CHECK(slurp(out2 / "disc_probes.csv") == disc);
    CHECK(slurp(out2 / "perron_probes.csv") == slurp(out / "perron_probes.csv"));
    CHECK(slurp(out2 / "sandwich.csv") == slurp(out / "sandwich.csv"));
}

TEST_CASE("schema errors exit 2") {
    const fs::path bad = write("bad.json", "{ not json");
    CHECK(run_scenario_file(bad.string(), (sandbox() / "x1").string(), std::nullopt) ==
          exit_schema);

    const fs::path missing = write("missing.json", R"json({"name": "m", "mode": "envelope"})json");
    CHECK(run_scenario_file(missing.string(), (sandbox() / "x2").string(), std::nullopt) ==
          exit_schema);

    const fs::path mode = write("mode.json", R"json({"name": "m", "mode": "nonsense"})json");
    CHECK(run_scenario_file(mode.string(), (sandbox() / "x3").string(), std::nullopt) ==
          exit_schema);
}

TEST_CASE("engine errors exit 3") {
    std::string text = kPaperScenario;
    const auto pos = text.find("[[0.25, 0], [0.6, 0]]");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 21, "[[2.0, 0]]");  // probe outside X
    const fs::path file = write("outside_probe.json", text);
    CHECK(run_scenario_file(file.string(), (sandbox() / "x4").string(), std::nullopt) ==
          exit_engine);
}

TEST_CASE("thinness scenario verdict gates the exit code") {
    const fs::path file = write("slit.json", kSlitScenario);
    CHECK(run_scenario_file(file.string(), (sandbox() / "slit_out").string(), std::nullopt) ==
          exit_pass);
    CHECK(fs::exists(sandbox() / "slit_out" / "thinness.json"));

    std::string wrong = kSlitScenario;
    const auto pos = wrong.find("NonThin(certified)");
    REQUIRE(pos != std::string::npos);
    wrong.replace(pos, 18, "ThinEvidence");
    const fs::path mismatch = write("slit_wrong.json", wrong);
    CHECK(run_scenario_file(mismatch.string(), (sandbox() / "slit_out2").string(), std::nullopt) ==
          exit_violation);
}

TEST_CASE("suite aggregates and keeps filename order") {
    const fs::path dir = sandbox() / "suite";
    fs::create_directories(dir);
    fs::copy_file(write("paper_mini.json", kPaperScenario), dir / "a_pass.json",
                  fs::copy_options::overwrite_existing);
    std::string wrong = kSlitScenario;
    const auto pos = wrong.find("NonThin(certified)");
    wrong.replace(pos, 18, "ThinEvidence");
    std::ofstream(dir / "b_fail.json") << wrong;

    const fs::path out = sandbox() / "suite_out";
    CHECK(cmd_suite(dir.string(), out.string(), 2, std::nullopt) == exit_violation);
    const std::string summary = slurp(out / "summary.csv");
    CHECK(summary.rfind("# schema=1\nscenario,exit_code,pass\n", 0) == 0);
    CHECK(summary.find("a_pass,0,1") != std::string::npos);
    CHECK(summary.find("b_fail,1,0") != std::string::npos);
    CHECK(summary.find("a_pass") < summary.find("b_fail"));

    // empty directory passes with an empty summary
    const fs::path empty = sandbox() / "suite_empty";
    fs::create_directories(empty);
    CHECK(cmd_suite(empty.string(), (sandbox() / "suite_empty_out").string(), 1, std::nullopt) ==
          exit_pass);
}
