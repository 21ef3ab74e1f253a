#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pluri/disc.hpp"
#include "pluri/objective.hpp"

namespace pluri {

struct SearchConfig {
    std::vector<int> degree_schedule{1, 2, 4, 8, 16, 24};
    int restarts = 20;
    int max_evals = 5000;         // per restart
    std::uint64_t seed = 1;
    double penalty_weight = 1e3;
    double init_scale_factor = 0.1;  // times signed_margin(X, x)
    int quadrature_m = 1024;
    double tol = 1e-7;               // simplex f/x tolerance
    bool structured_seeds = true;    // warm starts for radial ball-in-ball scenarios
};

struct DegreeTrace {
    int degree;
    double best_value;  // incumbent after finishing this degree
    long evals;
};

struct RestartRow {
    int degree;
    int restart;
    long evals;
    double best_value;  // incumbent after this restart
    bool feasible;      // restart produced at least one feasible candidate
};

struct SearchResult {
    bool has_feasible = false;
    double value = 0.0;  // best feasible functional value (may be -inf)
    AnalyticDisc best_disc;
    DiscClass best_class;
    std::vector<DegreeTrace> trace;
    std::vector<RestartRow> restart_rows;
    long feasible_count = 0;
    long infeasible_count = 0;
};

// Upper bound on EH(x): minimum of the Poisson functional over all evaluated
// feasible discs with f(0) = x.
SearchResult eh_estimate(const PiecewiseObjective& obj, const Point& x, const SearchConfig& cfg);

// Same search restricted to discs classified B1 or B2.
SearchResult f_estimate(const PiecewiseObjective& obj, const Point& x, const SearchConfig& cfg);

struct CoverageSearch {
    bool found = false;
    DiscClass cls;
    AnalyticDisc disc;
    double best_margin = 0.0;  // best (possibly negative) class margin reached
};

CoverageSearch find_covering_disc(const PiecewiseObjective& obj, const Point& x,
                                  const SearchConfig& cfg);

struct UscProbeResult {
    std::vector<double> values;  // f_estimate value per input point
    double defect = 0.0;         // max(0, limsup along sequence - value at limit)
};

// Empirical upper-semicontinuity probe along a sequence whose last entry is
// the limit point.
UscProbeResult usc_probe(const PiecewiseObjective& obj, const std::vector<Point>& points,
                         const SearchConfig& cfg);

std::string search_result_to_json(const SearchResult& r);
std::string trace_to_csv(const SearchResult& r);

}  // namespace pluri
