#include "pluri/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace pluri {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const json& req(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw schema_error(std::string("missing field '") + key + "'");
    return *it;
}

Point point_from_json(const json& j, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != 2 * n)
        throw schema_error("point must be an array of 2n reals");
    Point p;
    p.n = n;
    p.z[0] = complexd(j[0].get<double>(), j[1].get<double>());
    if (n == 2) p.z[1] = complexd(j[2].get<double>(), j[3].get<double>());
    return p;
}

Domain domain_from_json(const json& j, int n) {
    const std::string kind = req(j, "kind").get<std::string>();
    const std::string label = j.value("label", kind);
    if (kind == "ball")
        return Domain::ball(point_from_json(req(j, "center"), n), req(j, "radius").get<double>(),
                            label);
    if (kind == "annulus")
        return Domain::annulus(point_from_json(req(j, "center"), n), req(j, "r_in").get<double>(),
                               req(j, "r_out").get<double>(), label);
    if (kind == "polydisc")
        return Domain::polydisc(point_from_json(req(j, "center"), n), req(j, "r1").get<double>(),
                                req(j, "r2").get<double>(), label);
    if (kind == "slit_disc") {
        if (n != 1) throw schema_error("slit_disc requires n = 1");
        const auto c = req(j, "center");
        const auto a = req(j, "slit_a");
        const auto b = req(j, "slit_b");
        return Domain::slit_disc(complexd(c[0].get<double>(), c[1].get<double>()),
                                 req(j, "radius").get<double>(),
                                 complexd(a[0].get<double>(), a[1].get<double>()),
                                 complexd(b[0].get<double>(), b[1].get<double>()), label);
    }
    if (kind == "cusp_region") {
        if (n != 1) throw schema_error("cusp_region requires n = 1");
        return Domain::cusp_region(req(j, "x_max").get<double>(), label);
    }
    if (kind == "difference")
        return Domain::difference(domain_from_json(req(j, "a"), n),
                                  domain_from_json(req(j, "b"), n), label);
    if (kind == "intersection")
        return Domain::intersection(domain_from_json(req(j, "a"), n),
                                    domain_from_json(req(j, "b"), n), label);
    if (kind == "union")
        return Domain::set_union(domain_from_json(req(j, "a"), n),
                                 domain_from_json(req(j, "b"), n), label);
    throw schema_error("unknown domain kind '" + kind + "'");
}

GridSpec grid_from_json(const json& j, int n) {
    GridSpec g;
    const json& axes = req(j, "axes");
    if (!axes.is_array() || static_cast<int>(axes.size()) != 2 * n)
        throw schema_error("grid needs 2n axes");
    for (const json& a : axes)
        g.axes.push_back({req(a, "lo").get<double>(), req(a, "hi").get<double>(),
                          req(a, "res").get<int>()});
    return g;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string probe_csv(const std::vector<Point>& probes, const std::vector<double>& values, int n) {
    std::string out = "# schema=1\nindex";
    out += n == 1 ? ",re_z1,im_z1" : ",re_z1,im_z1,re_z2,im_z2";
    out += ",value\n";
    for (std::size_t i = 0; i < probes.size(); ++i) {
        out += std::to_string(i);
        out += ',' + fmt(probes[i].z[0].real()) + ',' + fmt(probes[i].z[0].imag());
        if (n == 2) out += ',' + fmt(probes[i].z[1].real()) + ',' + fmt(probes[i].z[1].imag());
        out += ',' + fmt(values[i]) + '\n';
    }
    return out;
}

PiecewiseObjective objective_from_scenario(const Scenario& s) {
    if (!s.X || !s.W) throw schema_error("envelope scenario needs domains X and W");
    std::optional<ExprFn> bv;
    if (s.boundary_values) bv = parse_expr(*s.boundary_values);
    try {
        return PiecewiseObjective(*s.X, *s.W, parse_expr(s.phi1), parse_expr(s.phi2), bv);
    } catch (const parse_error& e) {
        throw schema_error(std::string("objective expression: ") + e.what());
    }
}

}  // namespace

Domain domain_from_json_text(const std::string& text, int n) {
    return domain_from_json(json::parse(text), n);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open scenario file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw schema_error("malformed JSON in " + path + ": " + e.what());
    }
    try {
        Scenario s;
        s.name = req(j, "name").get<std::string>();
        s.n = j.value("n", 1);
        if (s.n != 1 && s.n != 2) throw schema_error("n must be 1 or 2");
        s.seed = j.value("seed", std::uint64_t{1});
        s.mode = req(j, "mode").get<std::string>();

        if (j.contains("domains")) {
            const json& d = j["domains"];
            if (d.contains("X")) s.X = domain_from_json(d["X"], s.n);
            if (d.contains("W")) s.W = domain_from_json(d["W"], s.n);
            if (d.contains("U")) s.U = domain_from_json(d["U"], s.n);
        }
        if (j.contains("objective")) {
            const json& o = j["objective"];
            s.phi1 = req(o, "phi1").get<std::string>();
            s.phi2 = req(o, "phi2").get<std::string>();
            if (o.contains("boundary_values"))
                s.boundary_values = o["boundary_values"].get<std::string>();
        }
        s.restricted_to_classes = j.value("restricted_to_classes", false);
        s.sandwich_tol = j.value("sandwich_tol", 0.02);

        s.search.seed = s.seed;
        if (j.contains("search")) {
            const json& c = j["search"];
            if (c.contains("degree_schedule"))
                s.search.degree_schedule = c["degree_schedule"].get<std::vector<int>>();
            s.search.restarts = c.value("restarts", s.search.restarts);
            s.search.max_evals = c.value("max_evals", s.search.max_evals);
            s.search.penalty_weight = c.value("penalty_weight", s.search.penalty_weight);
            s.search.init_scale_factor = c.value("init_scale_factor", s.search.init_scale_factor);
            s.search.quadrature_m = c.value("quadrature_m", s.search.quadrature_m);
            s.search.tol = c.value("tol", s.search.tol);
            s.search.structured_seeds = c.value("structured_seeds", s.search.structured_seeds);
        }
        s.relax.seed = s.seed;
        if (j.contains("relax")) {
            const json& c = j["relax"];
            if (c.contains("radii_steps"))
                s.relax.radii_steps = c["radii_steps"].get<std::vector<double>>();
            s.relax.directions = c.value("directions", s.relax.directions);
            s.relax.angular_nodes = c.value("angular_nodes", s.relax.angular_nodes);
            s.relax.tol = c.value("tol", s.relax.tol);
            s.relax.max_sweeps = c.value("max_sweeps", s.relax.max_sweeps);
        }
        if (j.contains("grid")) s.grid = grid_from_json(j["grid"], s.n);
        if (j.contains("probes"))
            for (const json& p : j["probes"]) s.probes.push_back(point_from_json(p, s.n));

        if (j.contains("thinness")) {
            const json& t = j["thinness"];
            s.V_radius = t.value("V_radius", s.V_radius);
            s.epsilon = t.value("epsilon", s.epsilon);
            if (t.contains("rho_schedule"))
                s.rho_schedule = t["rho_schedule"].get<std::vector<double>>();
            if (t.contains("cloud"))
                for (const json& p : t["cloud"]) s.cloud.push_back(point_from_json(p, s.n));
            if (t.contains("expected_verdict"))
                s.expected_verdict = t["expected_verdict"].get<std::string>();
        }
        return s;
    } catch (const json::exception& e) {
        throw schema_error("bad scenario field in " + path + ": " + e.what());
    }
}

int cmd_envelope(const Scenario& s, EngineChoice engine, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const PiecewiseObjective obj = objective_from_scenario(s);
    obj.validate();
    if (s.probes.empty()) throw schema_error("envelope scenario needs probes");

    std::vector<double> disc_values, perron_values;
    if (engine == EngineChoice::disc || engine == EngineChoice::both) {
        for (std::size_t i = 0; i < s.probes.size(); ++i) {
            const SearchResult r = s.restricted_to_classes
                                       ? f_estimate(obj, s.probes[i], s.search)
                                       : eh_estimate(obj, s.probes[i], s.search);
            disc_values.push_back(r.value);
            write_file(fs::path(out_dir) / ("search_probe_" + std::to_string(i) + ".json"),
                       search_result_to_json(r));
            write_file(fs::path(out_dir) / ("trace_probe_" + std::to_string(i) + ".csv"),
                       trace_to_csv(r));
        }
        write_file(fs::path(out_dir) / "disc_probes.csv", probe_csv(s.probes, disc_values, s.n));
    }
    if (engine == EngineChoice::perron || engine == EngineChoice::both) {
        if (!s.grid) throw schema_error("perron engine needs a grid");
        GridSpec grid = *s.grid;
        grid.restriction = *s.X;
        const EnvelopeGrid env = psh_envelope(obj, grid, s.relax);
        for (const Point& p : s.probes) perron_values.push_back(env.value_at(p));
        write_file(fs::path(out_dir) / "perron_probes.csv",
                   probe_csv(s.probes, perron_values, s.n));
        write_file(fs::path(out_dir) / "perron_meta.json", env.meta_json());
    }
    if (engine == EngineChoice::both) {
        std::string csv = "# schema=1\nindex,disc,perron,pass\n";
        bool all_pass = true;
        for (std::size_t i = 0; i < s.probes.size(); ++i) {
            const bool pass = disc_values[i] >= perron_values[i] - s.sandwich_tol;
            all_pass = all_pass && pass;
            csv += std::to_string(i) + ',' + fmt(disc_values[i]) + ',' + fmt(perron_values[i]) +
                   ',' + (pass ? "1" : "0") + '\n';
        }
        write_file(fs::path(out_dir) / "sandwich.csv", csv);
        if (!all_pass) return exit_violation;
    }
    return exit_pass;
}

int cmd_thinness(const Scenario& s, const std::string& out_dir) {
    fs::create_directories(out_dir);
    ThinnessQuery q;
    q.x = s.probes.empty() ? (s.n == 1 ? Point::c1(0.0) : Point::c2(0.0, 0.0)) : s.probes.front();
    q.V_radius = s.V_radius;
    q.epsilon = s.epsilon;
    if (!s.rho_schedule.empty()) q.rho_schedule = s.rho_schedule;
    ThinnessReport report;
    if (!s.cloud.empty()) {
        q.cloud = s.cloud;
        report = general_set_certificate(q, s.search);
    } else {
        if (!s.U) throw schema_error("thinness scenario needs domain U or a cloud");
        if (!s.grid) throw schema_error("thinness scenario needs a grid for the oracle");
        q.set = s.U;
        report = thinness_report(q, s.search, *s.grid, s.relax);
    }
    write_file(fs::path(out_dir) / "thinness.json", thinness_report_to_json(report));
    write_file(fs::path(out_dir) / "thinness.csv", thinness_report_to_csv(report));
    if (s.expected_verdict && *s.expected_verdict != to_string(report.verdict))
        return exit_violation;
    return exit_pass;
}

int cmd_max_principle(const Scenario& s, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const auto rows = run_suite(builtin_catalog(), s.sandwich_tol);
    write_file(fs::path(out_dir) / "max_principle.csv", suite_to_csv(rows));
    return suite_passes(rows) ? exit_pass : exit_violation;
}

int run_scenario_file(const std::string& path, const std::string& out_dir,
                      std::optional<std::uint64_t> seed_override) {
    Scenario s;
    try {
        s = load_scenario(path);
    } catch (const schema_error& e) {
        std::fprintf(stderr, "schema error: %s: %s\n", path.c_str(), e.what());
        return exit_schema;
    }
    if (seed_override) {
        s.seed = *seed_override;
        s.search.seed = *seed_override;
        s.relax.seed = *seed_override;
    }
    try {
        if (s.mode == "envelope") return cmd_envelope(s, EngineChoice::both, out_dir);
        if (s.mode == "thinness") return cmd_thinness(s, out_dir);
        if (s.mode == "max_principle") return cmd_max_principle(s, out_dir);
        std::fprintf(stderr, "schema error: %s: unknown mode '%s'\n", path.c_str(),
                     s.mode.c_str());
        return exit_schema;
    } catch (const schema_error& e) {
        std::fprintf(stderr, "schema error: %s: %s\n", path.c_str(), e.what());
        return exit_schema;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "engine error: %s: %s\n", path.c_str(), e.what());
        return exit_engine;
    }
}

int cmd_suite(const std::string& dir, const std::string& out_dir, int jobs,
              std::optional<std::uint64_t> seed_override) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    fs::create_directories(out_dir);
    std::vector<int> codes(files.size(), 0);
    std::atomic<std::size_t> next{0};
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(files.size())));
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= files.size()) return;
            const std::string sub = (fs::path(out_dir) / files[i].stem()).string();
            codes[i] = run_scenario_file(files[i].string(), sub, seed_override);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    std::string csv = "# schema=1\nscenario,exit_code,pass\n";
    bool all_pass = true;
    for (std::size_t i = 0; i < files.size(); ++i) {
        csv += files[i].stem().string() + ',' + std::to_string(codes[i]) + ',' +
               (codes[i] == 0 ? "1" : "0") + '\n';
        all_pass = all_pass && codes[i] == 0;
    }
    write_file(fs::path(out_dir) / "summary.csv", csv);
    std::fputs(csv.c_str(), stdout);
    return all_pass ? exit_pass : exit_violation;
}

}  // namespace pluri
