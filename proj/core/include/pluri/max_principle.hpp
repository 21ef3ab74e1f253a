#pragma once

#include <string>
#include <vector>

#include "pluri/expr.hpp"
#include "pluri/geometry.hpp"

namespace pluri {

struct PshSample {
    std::string name;
    ExprFn expr;
    std::string note;  // why the sample is plurisubharmonic (by construction)
};

struct SubMeanCheck {
    bool pass = false;
    double worst_violation = 0.0;  // max over trials of value - circle average
    int trials = 0;
};

// Numerical sub-mean-value certification: at random interior points, circle
// averages (along random complex lines for n = 2) must dominate the value up
// to 1e-8.  Quadrature doubles adaptively; radii shrink when the average has
// not settled (log-type samples near their singularity).
SubMeanCheck certify_psh(const PshSample& u, const Domain& X, int points = 1000,
                         std::uint64_t seed = 17);

struct SupCompare {
    double sup_U = 0.0;
    double sup_boundary = 0.0;
    double defect = 0.0;  // sup_U - sup_boundary
};

SupCompare sup_compare(const PshSample& u, const Domain& U, const Domain& X, const GridSpec& grid,
                       int boundary_k);

struct CatalogPair {
    PshSample u;
    Domain U;
    Domain X;
    GridSpec grid;
    int boundary_k = 512;
};

struct SuiteRow {
    std::string sample;
    std::string set;
    double sup_U = 0.0;
    double sup_boundary = 0.0;
    double defect = 0.0;
    bool pass = false;
};

// Built-in pairs with closed-form suprema; every U is connected or non-thin
// at each closure point, so equality of suprema is predicted.
std::vector<CatalogPair> builtin_catalog();

std::vector<SuiteRow> run_suite(const std::vector<CatalogPair>& catalog, double tol = 0.02);
bool suite_passes(const std::vector<SuiteRow>& rows);
std::string suite_to_csv(const std::vector<SuiteRow>& rows);

}  // namespace pluri
