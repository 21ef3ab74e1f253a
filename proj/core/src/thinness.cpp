#include "pluri/thinness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "pluri/nelder_mead.hpp"

namespace pluri {

namespace {

using MarginFn = std::function<double(const Point&)>;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

AnalyticDisc params_to_disc(const Point& x, int degree, const std::vector<double>& p) {
    AnalyticDisc f;
    f.center = x;
    f.degree = degree;
    std::size_t k = 0;
    for (int j = 0; j < x.n; ++j) {
        f.coeffs[j].resize(degree);
        for (int c = 0; c < degree; ++c) {
            f.coeffs[j][c] = complexd(p[k], p[k + 1]);
            k += 2;
        }
    }
    return f;
}

struct HardCandidate {
    bool valid = false;
    AnalyticDisc disc;
    double measure = 0.0;
};

// Minimum margin of the disc range inside V over the boundary circle and a
// family of interior circles.
double range_margin(const AnalyticDisc& f, const Domain& V, const CircleQuadrature& q) {
    double m = V.signed_margin(eval_disc(f, 0.0));
    for (complexd z : q.nodes()) m = std::min(m, V.signed_margin(eval_disc(f, z)));
    for (double r : {0.25, 0.5, 0.75, 0.9}) {
        for (int a = 0; a < 32; ++a) {
            const complexd z = std::polar(r, 2.0 * M_PI * a / 32);
            m = std::min(m, V.signed_margin(eval_disc(f, z)));
        }
    }
    return m;
}

double hard_measure(const AnalyticDisc& f, const MarginFn& target_margin,
                    const CircleQuadrature& q) {
    int in = 0;
    for (complexd z : q.nodes())
        if (target_margin(eval_disc(f, z)) > 0.0) ++in;
    return static_cast<double>(in) / q.size();
}

bool revalidate(const AnalyticDisc& f, const MarginFn& target_margin, const Domain& V,
                double epsilon, int base_m, double* measure_out) {
    const CircleQuadrature fine(4 * base_m);
    const double m = hard_measure(f, target_margin, fine);
    if (measure_out) *measure_out = m;
    return m > 1.0 - epsilon && range_margin(f, V, fine) >= kFeasibilityMargin;
}

std::optional<CertificateResult> search_certificate(const MarginFn& u_margin, const Point& x,
                                                    double V_radius, double epsilon,
                                                    const SearchConfig& cfg,
                                                    const std::vector<double>& seed_scales,
                                                    double* best_measure) {
    const Domain V = Domain::ball(x, V_radius);
    const CircleQuadrature quad(cfg.quadrature_m);
    const double h_soft = std::max(1e-4, 0.01 * V_radius);
    const auto target_margin = [&](const Point& p) {
        return std::min(u_margin(p), V.signed_margin(p));
    };

    HardCandidate best;
    double best_any = 0.0;
    const int n = x.n;

    auto score = [&](const AnalyticDisc& f) {
        double soft = 0.0;
        int in = 0;
        for (complexd z : quad.nodes()) {
            const double tm = target_margin(eval_disc(f, z));
            soft += std::clamp(tm / h_soft, 0.0, 1.0);
            if (tm > 0.0) ++in;
        }
        soft /= quad.size();
        const double hard = static_cast<double>(in) / quad.size();
        const double rm = range_margin(f, V, quad);
        if (rm >= kFeasibilityMargin) {
            best_any = std::max(best_any, hard);
            if (!best.valid || hard > best.measure) best = {true, f, hard};
        }
        const double gap = std::max(0.0, kFeasibilityMargin - rm);
        return -soft + cfg.penalty_weight * gap * gap;
    };

    auto try_finish = [&]() -> std::optional<CertificateResult> {
        if (!best.valid || best.measure <= 1.0 - epsilon) return std::nullopt;
        double m = 0.0;
        if (revalidate(best.disc, target_margin, V, epsilon, cfg.quadrature_m, &m))
            return CertificateResult{best.disc, m};
        return std::nullopt;
    };

    std::uint64_t state = cfg.seed ^ 0x7468696e6e657373ULL;
    std::mt19937_64 rng(splitmix64(state));
    std::normal_distribution<double> gauss;

    std::vector<double> incumbent;
    for (int degree : cfg.degree_schedule) {
        const int dim = 2 * n * degree;

        std::vector<std::vector<double>> starts;
        if (!incumbent.empty()) {
            std::vector<double> pad(dim, 0.0);
            // re-layout per coordinate block when the degree grows
            const int prev_degree = static_cast<int>(incumbent.size()) / (2 * n);
            for (int j = 0; j < n; ++j)
                for (int c = 0; c < prev_degree; ++c) {
                    pad[2 * (j * degree + c)] = incumbent[2 * (j * prev_degree + c)];
                    pad[2 * (j * degree + c) + 1] = incumbent[2 * (j * prev_degree + c) + 1];
                }
            starts.push_back(std::move(pad));
        }
        for (double c : seed_scales) {
            if (c <= 0.0 || c >= 0.95 * V_radius) continue;
            std::vector<double> s(dim, 0.0);
            s[0] = c;  // f(z) = x + c z in the first coordinate
            starts.push_back(std::move(s));
        }
        while (static_cast<int>(starts.size()) < cfg.restarts) {
            std::vector<double> s(dim);
            for (double& v : s) v = cfg.init_scale_factor * V_radius * gauss(rng);
            starts.push_back(std::move(s));
        }

        NelderMeadOptions opt;
        opt.max_evals = cfg.max_evals;
        opt.f_tol = cfg.tol;
        opt.x_tol = cfg.tol;
        const auto fn = [&](const std::vector<double>& p) {
            return score(params_to_disc(x, degree, p));
        };

        std::vector<double> degree_best;
        double degree_best_f = std::numeric_limits<double>::infinity();
        for (const auto& s0 : starts) {
            score(params_to_disc(x, degree, s0));
            if (auto done = try_finish()) {
                if (best_measure) *best_measure = best_any;
                return done;
            }
            const auto out = nelder_mead(fn, s0, 0.05 * V_radius, opt);
            if (out.f < degree_best_f) {
                degree_best_f = out.f;
                degree_best = out.x;
            }
            if (auto done = try_finish()) {
                if (best_measure) *best_measure = best_any;
                return done;
            }
        }
        incumbent = std::move(degree_best);
    }
    if (best_measure) *best_measure = best_any;
    return std::nullopt;
}

MarginFn cloud_sausage_margin(std::vector<Point> centers, double rho) {
    const double cap = 1e-3;
    return [centers = std::move(centers), rho, cap](const Point& p) {
        double m = -std::numeric_limits<double>::infinity();
        for (const Point& c : centers) {
            m = std::max(m, rho - dist(p, c));
            if (m > rho * 0.5 + cap) break;  // deep inside some ball already
        }
        return m;
    };
}

std::vector<Point> cloud_without_x(const ThinnessQuery& q) {
    std::vector<Point> out;
    for (const Point& y : q.cloud)
        if (dist(y, q.x) > 1e-12) out.push_back(y);
    return out;
}

}  // namespace

void validate_query(const ThinnessQuery& q) {
    if (q.V_radius <= 0.0) throw std::invalid_argument("thinness: V_radius must be positive");
    if (q.epsilon <= 0.0 || q.epsilon >= 1.0)
        throw std::invalid_argument("thinness: epsilon must lie in (0,1)");
    if (q.set) {
        // x must be a limit point of U \ {x}: look for members on shrinking
        // circles (n = 1) or sphere samples (n = 2) around x.
        const std::vector<double> radii = {0.5, 0.1, 0.02, 0.004};
        int hits = 0;
        std::mt19937_64 rng(11);
        std::normal_distribution<double> gauss;
        for (std::size_t ri = 0; ri < radii.size(); ++ri) {
            const double r = radii[ri] * q.V_radius;
            bool hit = false;
            for (int a = 0; a < 256 && !hit; ++a) {
                Point p = q.x;
                if (q.x.n == 1) {
                    p.z[0] += std::polar(r, 2.0 * M_PI * a / 256);
                } else {
                    complexd d1(gauss(rng), gauss(rng)), d2(gauss(rng), gauss(rng));
                    const double nn = std::sqrt(std::norm(d1) + std::norm(d2));
                    p.z[0] += r * d1 / nn;
                    p.z[1] += r * d2 / nn;
                }
                hit = q.set->contains(p);
            }
            if (hit) ++hits;
        }
        // Hits on at least two of the shrinking circles; exact membership can
        // underflow at the smallest scales for cusp-like sets.
        if (hits < 2)
            throw std::invalid_argument("thinness: x is not in closure(U \\ {x}) (sampled)");
    } else if (!q.cloud.empty()) {
        const auto rest = cloud_without_x(q);
        if (rest.empty()) throw std::invalid_argument("thinness: cloud Y \\ {x} is empty");
        double dmin = std::numeric_limits<double>::infinity();
        for (const Point& y : rest) dmin = std::min(dmin, dist(y, q.x));
        if (dmin > 0.1 * q.V_radius)
            throw std::invalid_argument("thinness: x is isolated from the cloud (sampled)");
    } else {
        throw std::invalid_argument("thinness: query needs a set or a point cloud");
    }
}

std::optional<CertificateResult> nonthin_certificate(const ThinnessQuery& q,
                                                     const SearchConfig& cfg,
                                                     double* best_measure) {
    validate_query(q);
    if (!q.set)
        throw std::invalid_argument("nonthin_certificate: open-set query required "
                                    "(use general_set_certificate for clouds)");
    const Domain U = *q.set;
    const MarginFn margin = [U](const Point& p) { return U.signed_margin(p); };
    std::vector<double> scales = {0.05, 0.1 * q.V_radius, 0.4 * q.V_radius};
    scales.insert(scales.end(), q.extra_seed_scales.begin(), q.extra_seed_scales.end());
    return search_certificate(margin, q.x, q.V_radius, q.epsilon, cfg, scales, best_measure);
}

double thinness_oracle(const ThinnessQuery& q, const GridSpec& grid, const RelaxConfig& cfg) {
    validate_query(q);
    if (!q.set) throw std::invalid_argument("thinness_oracle: open-set query required");
    const Domain V1 = Domain::ball(q.x, 0.5 * q.V_radius);
    const Domain U1 = Domain::intersection(*q.set, V1, "U cap V1");
    const EnvelopeGrid g = relative_extremal(U1, V1, grid, cfg);
    double node_dist = 0.0;
    const std::size_t node = g.nearest_node(q.x, &node_dist);
    double max_step = 0.0;
    for (std::size_t ax = 0; ax < grid.axes.size(); ++ax)
        max_step = std::max(max_step, grid.step(static_cast<int>(ax)));
    if (node_dist > 2.0 * max_step)
        throw std::runtime_error("thinness_oracle: nearest grid node too far from x; refine grid");
    return g.values[node];
}

ThinnessReport thinness_report(const ThinnessQuery& q, const SearchConfig& search_cfg,
                               const GridSpec& grid, const RelaxConfig& relax_cfg) {
    ThinnessReport r;
    r.V_radius = q.V_radius;
    r.epsilon = q.epsilon;
    double best = 0.0;
    auto cert = nonthin_certificate(q, search_cfg, &best);
    r.best_measure = cert ? std::max(best, cert->measure) : best;
    if (cert) r.certificate = std::move(cert);
    r.oracle_value = thinness_oracle(q, grid, relax_cfg);
    if (r.certificate)
        r.verdict = ThinnessVerdict::non_thin_certified;
    else if (*r.oracle_value >= -1.0 + 0.1)
        r.verdict = ThinnessVerdict::thin_evidence;
    else
        r.verdict = ThinnessVerdict::inconclusive;
    return r;
}

ThinnessReport general_set_certificate(const ThinnessQuery& q, const SearchConfig& cfg) {
    validate_query(q);
    if (q.cloud.empty())
        throw std::invalid_argument("general_set_certificate: point-cloud query required");
    const auto centers = cloud_without_x(q);
    ThinnessReport r;
    r.V_radius = q.V_radius;
    r.epsilon = q.epsilon;
    for (double rho : q.rho_schedule) {
        if (rho <= 0.0) throw std::invalid_argument("general_set_certificate: rho must be > 0");
        const MarginFn margin = cloud_sausage_margin(centers, rho);
        std::vector<double> scales = {0.4 * rho, 0.8 * rho, 0.05};
        scales.insert(scales.end(), q.extra_seed_scales.begin(), q.extra_seed_scales.end());
        double best = 0.0;
        auto cert = search_certificate(margin, q.x, q.V_radius, q.epsilon, cfg, scales, &best);
        RhoResult row;
        row.rho = rho;
        row.success = cert.has_value();
        row.best_measure = cert ? std::max(best, cert->measure) : best;
        if (cert) {
            row.disc = cert->disc;
            if (!r.certificate) r.certificate = *cert;
        }
        r.best_measure = std::max(r.best_measure, row.best_measure);
        r.rho_results.push_back(std::move(row));
    }
    // Inconclusive by design: the corollary quantifies over every open
    // superset and a finite rho schedule is only a surrogate.
    r.verdict = ThinnessVerdict::inconclusive;
    return r;
}

const char* to_string(ThinnessVerdict v) {
    switch (v) {
        case ThinnessVerdict::non_thin_certified: return "NonThin(certified)";
        case ThinnessVerdict::thin_evidence: return "ThinEvidence";
        case ThinnessVerdict::inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string thinness_report_to_json(const ThinnessReport& r) {
    nlohmann::json j;
    j["verdict"] = to_string(r.verdict);
    j["best_measure"] = r.best_measure;
    j["V_radius"] = r.V_radius;
    j["epsilon"] = r.epsilon;
    if (r.oracle_value) j["oracle_value"] = *r.oracle_value;
    if (r.certificate) {
        j["certificate"]["measure"] = r.certificate->measure;
        j["certificate"]["disc"] = nlohmann::json::parse(disc_to_json(r.certificate->disc));
    }
    for (const RhoResult& row : r.rho_results) {
        nlohmann::json e;
        e["rho"] = row.rho;
        e["success"] = row.success;
        e["best_measure"] = row.best_measure;
        j["rho_results"].push_back(e);
    }
    return j.dump(2);
}

std::string thinness_report_to_csv(const ThinnessReport& r) {
    std::string out = "# schema=1\nparam,best_measure,oracle_value\n";
    char buf[160];
    const double oracle = r.oracle_value ? *r.oracle_value : std::nan("");
    if (r.rho_results.empty()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.epsilon, r.best_measure, oracle);
        out += buf;
    } else {
        for (const RhoResult& row : r.rho_results) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", row.rho, row.best_measure,
                          oracle);
            out += buf;
        }
    }
    return out;
}

}  // namespace pluri
