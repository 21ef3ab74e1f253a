#pragma once

#include <optional>
#include <vector>

#include "pluri/expr.hpp"
#include "pluri/geometry.hpp"

namespace pluri {

struct UscResult {
    double value;                      // sup at the final (smallest) radius
    bool unstable;                     // successive levels differ by > 0.1
    std::vector<double> level_values;  // one sup per radius level
};

// Sampled approximation of limsup_{q->p, q in d} e(q).  The sample sequence
// is derived deterministically from (p, radii) so concurrent calls agree.
UscResult usc_star(const ExprFn& e, const Domain& d, const Point& p,
                   const std::vector<double>& radii, int min_samples = 64);

std::vector<double> default_star_radii();

// The piecewise objective: phi1 on X \ cl(W), phi2 in W and, on the boundary
// band of W, the exact boundary expression when supplied, otherwise the
// sampled min of the two upper regularizations.
class PiecewiseObjective {
public:
    PiecewiseObjective(Domain X, Domain W, ExprFn phi1, ExprFn phi2,
                       std::optional<ExprFn> boundary_values = std::nullopt,
                       std::vector<double> star_radii = default_star_radii());

    const Domain& X() const { return X_; }
    const Domain& W() const { return W_; }
    const Domain& outer() const { return outer_; }  // X \ cl(W)
    const ExprFn& phi1() const { return phi1_; }
    const ExprFn& phi2() const { return phi2_; }
    const std::optional<ExprFn>& boundary_values() const { return boundary_; }
    const std::vector<double>& star_radii() const { return star_radii_; }

    int dim() const { return X_.dim(); }
    double eval_phi(const Point& p) const;

    // Sampled sanity check that W is a proper subdomain of X; throws on
    // violation.  Separate from construction because it costs ~10^3 evals.
    void validate(int samples = 1000) const;

private:
    Domain X_;
    Domain W_;
    Domain outer_;
    ExprFn phi1_;
    ExprFn phi2_;
    std::optional<ExprFn> boundary_;
    std::vector<double> star_radii_;
};

}  // namespace pluri
