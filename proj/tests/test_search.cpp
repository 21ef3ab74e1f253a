#include <doctest.h>

#include <limits>

#include "pluri/search.hpp"

using namespace pluri;

namespace {
PiecewiseObjective paper_objective() {
    return PiecewiseObjective(Domain::ball(Point::c1(0.0), 1.0, "X"),
                              Domain::ball(Point::c1(0.0), 0.5, "W"), parse_expr("2"),
                              parse_expr("-1"));
}

SearchConfig small_cfg() {
    SearchConfig cfg;
    cfg.degree_schedule = {1, 2, 4};
    cfg.restarts = 6;
    cfg.max_evals = 600;
    cfg.quadrature_m = 256;
    return cfg;
}
}  // namespace

TEST_CASE("class-restricted estimate on the paper example") {
    const auto obj = paper_objective();
    const auto cfg = small_cfg();
    // inside W the constant disc is B1 with mean phi2 = -1
    CHECK(f_estimate(obj, Point::c1(0.0), cfg).value == -1.0);
    CHECK(f_estimate(obj, Point::c1(0.25), cfg).value == -1.0);
    // outside cl(W) every admissible disc averages phi1 = 2
    CHECK(f_estimate(obj, Point::c1(0.75), cfg).value == 2.0);
}

TEST_CASE("class-restricted estimate on the W boundary needs a B2 disc") {
    const auto obj = paper_objective();
    SearchConfig cfg = small_cfg();
    const SearchResult r = f_estimate(obj, Point::c1(0.5), cfg);
    REQUIRE(r.has_feasible);
    CHECK(r.value == 2.0);  // F jumps to 2 on the boundary while phi = -1 there
    CHECK(r.best_class.label == DiscLabel::B2);
}

TEST_CASE("eh estimate is bounded by phi off the boundary") {
    const auto obj = paper_objective();
    const auto cfg = small_cfg();
    const SearchResult inside = eh_estimate(obj, Point::c1(0.25), cfg);
    REQUIRE(inside.has_feasible);
    CHECK(inside.value == -1.0);
    const SearchResult outside = eh_estimate(obj, Point::c1(0.9), cfg);
    REQUIRE(outside.has_feasible);
    CHECK(outside.value <= 2.0);
}

TEST_CASE("degree schedule incumbents never get worse") {
    const auto obj = paper_objective();
    SearchConfig cfg = small_cfg();
    cfg.degree_schedule = {1, 2, 4, 8};
    const SearchResult r = eh_estimate(obj, Point::c1(0.75), cfg);
    REQUIRE(r.trace.size() == 4);
    for (std::size_t i = 1; i < r.trace.size(); ++i)
        CHECK(r.trace[i].best_value <= r.trace[i - 1].best_value + 1e-12);
}

TEST_CASE("search is deterministic for a fixed seed") {
    const auto obj = paper_objective();
    SearchConfig cfg = small_cfg();
    cfg.seed = 42;
    const std::string a = search_result_to_json(eh_estimate(obj, Point::c1(0.6), cfg));
    const std::string b = search_result_to_json(eh_estimate(obj, Point::c1(0.6), cfg));
    CHECK(a == b);
}

TEST_CASE("center outside X is rejected") {
    const auto obj = paper_objective();
    CHECK_THROWS(eh_estimate(obj, Point::c1(2.0), small_cfg()));
}

TEST_CASE("trace csv shape") {
    const auto obj = paper_objective();
    const SearchResult r = eh_estimate(obj, Point::c1(0.25), small_cfg());
    const std::string csv = trace_to_csv(r);
    CHECK(csv.rfind("# schema=1\ndegree,restart,evals,best_value,feasible\n", 0) == 0);
    CHECK(!r.restart_rows.empty());
}

TEST_CASE("covering disc exists at interior points") {
    const auto obj = paper_objective();
    const CoverageSearch c = find_covering_disc(obj, Point::c1(0.4), small_cfg());
    CHECK(c.found);
}

TEST_CASE("usc probe sees no defect away from the boundary") {
    const auto obj = paper_objective();
    const std::vector<Point> seq = {Point::c1(0.72), Point::c1(0.7), Point::c1(0.68),
                                    Point::c1(0.67)};
    const UscProbeResult r = usc_probe(obj, seq, small_cfg());
    REQUIRE(r.values.size() == seq.size());
    CHECK(r.defect == doctest::Approx(0.0).epsilon(1e-9));
}
