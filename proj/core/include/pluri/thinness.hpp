#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pluri/disc.hpp"
#include "pluri/perron.hpp"
#include "pluri/search.hpp"

namespace pluri {

enum class ThinnessVerdict { non_thin_certified, thin_evidence, inconclusive };

// Query against an open set U (set) or a finite point cloud Y (cloud); the
// cloud form runs against sausages U(rho) = union of rho-balls around
// Y \ {x} for the scheduled rho values.
struct ThinnessQuery {
    std::optional<Domain> set;
    std::vector<Point> cloud;
    Point x;
    double V_radius = 0.5;
    double epsilon = 0.01;
    std::vector<double> rho_schedule{0.1, 0.01, 0.002};
    std::vector<double> extra_seed_scales;  // additional c z warm-start radii
};

struct CertificateResult {
    AnalyticDisc disc;
    double measure = 0.0;  // fraction of T mapped into V intersect U
};

struct RhoResult {
    double rho = 0.0;
    bool success = false;
    double best_measure = 0.0;
    std::optional<AnalyticDisc> disc;
};

struct ThinnessReport {
    std::optional<CertificateResult> certificate;
    double best_measure = 0.0;
    std::optional<double> oracle_value;
    ThinnessVerdict verdict = ThinnessVerdict::inconclusive;
    double V_radius = 0.0;
    double epsilon = 0.0;
    std::vector<RhoResult> rho_results;
};

// Precondition x in closure(set \ {x}), checked by sampling; throws
// std::invalid_argument on rejection.
void validate_query(const ThinnessQuery& q);

// Maximizes the boundary arc measure sigma(T intersect f^{-1}(V intersect U))
// over polynomial discs with f(0) = x and f(cl D) inside V = ball(x, V_radius)
// with margin >= kFeasibilityMargin.  Returns the first disc whose revalidated
// measure exceeds 1 - epsilon, else nullopt; best measure reached goes to
// *best_measure when given.
std::optional<CertificateResult> nonthin_certificate(const ThinnessQuery& q,
                                                     const SearchConfig& cfg,
                                                     double* best_measure = nullptr);

// Value at the grid node nearest x of the relative extremal function
// u_{U cap V1, V1} with V1 = ball(x, V_radius / 2).  Errors when the nearest
// node is farther than two grid steps from x.
double thinness_oracle(const ThinnessQuery& q, const GridSpec& grid, const RelaxConfig& cfg);

// Certificate search plus oracle fallback rolled into a verdict.
ThinnessReport thinness_report(const ThinnessQuery& q, const SearchConfig& search_cfg,
                               const GridSpec& grid, const RelaxConfig& relax_cfg);

// Point-cloud form: per-rho certificate runs against the ball sausages.  The
// verdict stays inconclusive by design -- the underlying corollary quantifies
// over all open supersets and a finite schedule never exhausts them.
ThinnessReport general_set_certificate(const ThinnessQuery& q, const SearchConfig& cfg);

std::string thinness_report_to_json(const ThinnessReport& r);
std::string thinness_report_to_csv(const ThinnessReport& r);
const char* to_string(ThinnessVerdict v);

}  // namespace pluri
