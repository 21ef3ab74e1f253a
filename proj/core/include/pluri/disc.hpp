#pragma once

#include <array>
#include <string>
#include <vector>

#include "pluri/geometry.hpp"
#include "pluri/objective.hpp"

namespace pluri {

// Closed analytic disc realized as a polynomial map f: cl(D) -> C^n with
// f(z) = center + sum_{k=1..degree} coeffs[j][k-1] z^k per coordinate j.
struct AnalyticDisc {
    Point center;
    int degree = 0;
    std::array<std::vector<complexd>, 2> coeffs;  // coeffs[j].size() == degree

    static AnalyticDisc constant(const Point& center);
    int dim() const { return center.n; }
};

Point eval_disc(const AnalyticDisc& f, complexd z);

std::string disc_to_json(const AnalyticDisc& f);
AnalyticDisc disc_from_json(const std::string& text);

// Uniform quadrature on the unit circle; M a power of two >= 256.
class CircleQuadrature {
public:
    explicit CircleQuadrature(int node_count = 1024);
    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<complexd>& nodes() const { return nodes_; }
    double weight() const { return 1.0 / size(); }

private:
    std::vector<complexd> nodes_;
};

enum class DiscLabel { B1, B2, GeneralFeasible, Infeasible };

struct DiscClass {
    DiscLabel label = DiscLabel::Infeasible;
    double range_margin = 0.0;  // min margin of f(cl D) in X
    double margin_w = 0.0;      // min margin of f(T) in W
    double margin_outer = 0.0;  // min margin of f(T) in X \ cl(W)
};

// Strict-containment threshold realizing the open-set conditions f(T) in W etc.
inline constexpr double kFeasibilityMargin = 1e-6;

DiscClass classify(const AnalyticDisc& f, const PiecewiseObjective& obj, int probe = 1024);

// (1/2pi) int phi(f(e^{i theta})) d theta; -inf absorbs.
double poisson_mean(const AnalyticDisc& f, const PiecewiseObjective& obj,
                    const CircleQuadrature& q);

// Fraction of quadrature nodes whose image lies in the open target set.
double boundary_measure(const AnalyticDisc& f, const Domain& target, const CircleQuadrature& q);

const char* to_string(DiscLabel label);

}  // namespace pluri
