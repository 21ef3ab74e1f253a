#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pluri/geometry.hpp"
#include "pluri/objective.hpp"

namespace pluri {

struct RelaxConfig {
    std::vector<double> radii_steps{1, 2, 4};  // circle radii in units of the grid step
    int directions = 32;                       // extra complex directions for n = 2
    int angular_nodes = 16;
    double tol = 1e-6;     // max-change stopping threshold
    long max_sweeps = 100000;
    std::uint64_t seed = 7;
};

struct EnvelopeGrid {
    GridSpec spec;
    std::vector<double> values;          // all nodes; exterior nodes carry the boundary rule
    std::vector<std::uint8_t> interior;  // restriction membership per node
    long sweeps = 0;
    double residual = 0.0;
    bool converged = false;

    double value_at(const Point& p) const;  // multilinear
    std::size_t nearest_node(const Point& p, double* node_dist = nullptr) const;
    std::string to_csv() const;
    std::string meta_json() const;
};

// Monotone relaxation u <- min(u, obstacle, circle averages) on a grid.
// Jacobi two-buffer sweeps; values are nonincreasing and obstacle-dominated
// by construction.
class PerronRelaxer {
public:
    using ScalarField = std::function<double(const Point&)>;

    PerronRelaxer(const Domain& X, const GridSpec& grid, const RelaxConfig& cfg,
                  ScalarField obstacle, ScalarField exterior_rule);
    ~PerronRelaxer();  // out of line: Stencil is incomplete here

    EnvelopeGrid initial_grid() const;  // values = obstacle
    double sweep(EnvelopeGrid& g) const;
    EnvelopeGrid solve() const;

private:
    struct Stencil;
    Domain X_;
    GridSpec grid_;
    RelaxConfig cfg_;
    ScalarField obstacle_;
    ScalarField exterior_;
    int dims_;
    std::vector<std::size_t> shape_;
    std::vector<std::ptrdiff_t> strides_;
    std::vector<double> steps_;
    double h_min_ = 0.0, h_max_ = 0.0;
    std::vector<double> obstacle_values_;
    std::vector<double> margins_;
    std::vector<std::uint8_t> interior_;
    std::vector<std::array<double, 4>> dir_offsets_;  // unit direction per (dir, angle), R^{2n}
    std::vector<Stencil> stencils_;

    double interpolate(const EnvelopeGrid& g, const std::array<double, 4>& x) const;
    double circle_average_slow(const EnvelopeGrid& g, const std::array<double, 4>& base,
                               std::size_t dir, double radius) const;
};

// Largest plurisubharmonic minorant of the piecewise objective on the grid.
EnvelopeGrid psh_envelope(const PiecewiseObjective& obj, const GridSpec& grid,
                          const RelaxConfig& cfg);

// Two-grid refinement of the envelope: solves on the requested grid and on
// its 2:1 coarsening, then extrapolates 2 v_h - v_{2h}.  The leading error of
// the relaxed envelope is O(h) near gradient kinks of the true envelope, so
// the extrapolation cancels it.  Requires every axis resolution of the form
// 2m + 1.
struct RefinedEnvelope {
    EnvelopeGrid fine;
    EnvelopeGrid coarse;

    double value_at(const Point& p) const {
        return 2.0 * fine.value_at(p) - coarse.value_at(p);
    }
    bool converged() const { return fine.converged && coarse.converged; }
};

RefinedEnvelope psh_envelope_refined(const PiecewiseObjective& obj, const GridSpec& grid,
                                     const RelaxConfig& cfg);

// Relative extremal function u_{U,X}; the closure variant fattens the
// obstacle set by half a grid step so it covers the nodes adjacent to cl(U).
EnvelopeGrid relative_extremal(const Domain& U, const Domain& X, const GridSpec& grid,
                               const RelaxConfig& cfg, bool closure_variant = false);

// Sup-norm difference over interior nodes between the U and cl(U) variants.
double closure_extremal_compare(const Domain& U, const Domain& X, const GridSpec& grid,
                                const RelaxConfig& cfg);

}  // namespace pluri
