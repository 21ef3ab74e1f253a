#include "pluri/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "pluri/nelder_mead.hpp"

namespace pluri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kValueClamp = 1e9;   // keeps -inf candidates finite for the simplex
constexpr double kOutsideValue = 1e3; // stand-in for phi at points that left X

std::uint64_t splitmix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

enum class Mode { all_discs, class_restricted };

AnalyticDisc params_to_disc(const Point& x, int degree, const std::vector<double>& params) {
    AnalyticDisc f;
    f.center = x;
    f.degree = degree;
    std::size_t idx = 0;
    for (int j = 0; j < x.n; ++j) {
        f.coeffs[j].resize(degree);
        for (int k = 0; k < degree; ++k) {
            f.coeffs[j][k] = complexd(params[idx], params[idx + 1]);
            idx += 2;
        }
    }
    return f;
}

std::vector<double> disc_to_params(const AnalyticDisc& f, int degree) {
    std::vector<double> p(2 * f.dim() * degree, 0.0);
    std::size_t idx = 0;
    for (int j = 0; j < f.dim(); ++j) {
        for (int k = 0; k < degree; ++k) {
            if (k < f.degree) {
                p[idx] = f.coeffs[j][k].real();
                p[idx + 1] = f.coeffs[j][k].imag();
            }
            idx += 2;
        }
    }
    return p;
}

// Shared candidate evaluator: penalized score for the simplex plus exact
// bookkeeping of feasible candidates.
class Scorer {
public:
    Scorer(const PiecewiseObjective& obj, const Point& x, const SearchConfig& cfg, Mode mode)
        : obj_(obj), x_(x), cfg_(cfg), mode_(mode), quad_(cfg.quadrature_m) {
        for (int c = 1; c <= 8; ++c) {
            const double r = 0.975 * c / 8.0;
            for (int a = 0; a < 32; ++a)
                interior_probes_.push_back(std::polar(r, 2.0 * M_PI * (a + 0.37 * c) / 32));
        }
    }

    struct Eval {
        double score;
        double value;         // quadrature mean with outside-X stand-ins
        double range_margin;  // over interior probes and T nodes
        double margin_w;
        double margin_outer;
        bool feasible;
    };

    Eval evaluate(const AnalyticDisc& f) {
        Eval e{};
        double range_margin = obj_.X().signed_margin(f.center);
        for (const complexd& z : interior_probes_)
            range_margin = std::min(range_margin, obj_.X().signed_margin(eval_disc(f, z)));

        double margin_w = kInf, margin_outer = kInf;
        double sum = 0.0;
        bool neg_inf = false;
        for (const complexd& z : quad_.nodes()) {
            const Point p = eval_disc(f, z);
            const double mx = obj_.X().signed_margin(p);
            range_margin = std::min(range_margin, mx);
            margin_w = std::min(margin_w, obj_.W().signed_margin(p));
            margin_outer = std::min(margin_outer, obj_.outer().signed_margin(p));
            if (mx <= 0.0) {
                sum += kOutsideValue;
                continue;
            }
            double v;
            try {
                v = obj_.eval_phi(p);
            } catch (const eval_error&) {
                sum += kOutsideValue;
                continue;
            }
            if (std::isinf(v)) {
                neg_inf = true;
                v = -kValueClamp;
            }
            sum += v;
        }
        e.value = sum * quad_.weight();
        e.range_margin = range_margin;
        e.margin_w = margin_w;
        e.margin_outer = margin_outer;

        const double gap = std::max(0.0, kFeasibilityMargin - range_margin);
        e.score = std::max(e.value, -kValueClamp) + cfg_.penalty_weight * gap * gap;
        bool feasible = range_margin >= kFeasibilityMargin;
        if (mode_ == Mode::class_restricted) {
            const double bm = std::max(margin_w, margin_outer);
            const double bgap = std::max(0.0, kFeasibilityMargin - bm);
            e.score += cfg_.penalty_weight * bgap * bgap;
            feasible = feasible && bm >= kFeasibilityMargin;
        }
        e.feasible = feasible;
        if (feasible) {
            ++feasible_count;
            const double v = neg_inf ? -kInf : e.value;
            if (!best || v < best_value) {
                best = f;
                best_value = v;
            }
        } else {
            ++infeasible_count;
        }
        return e;
    }

    long feasible_count = 0;
    long infeasible_count = 0;
    std::optional<AnalyticDisc> best;
    double best_value = kInf;

private:
    const PiecewiseObjective& obj_;
    Point x_;
    const SearchConfig& cfg_;
    Mode mode_;
    CircleQuadrature quad_;
    std::vector<complexd> interior_probes_;
};

// ---- structured warm starts -------------------------------------------------
//
// For concentric ball-in-ball scenarios the minimizing discs are close to
// exp(H) where Re H on the circle is a two-level profile: an arc at radius
// rho_in inside W and the rest at rho_out just inside X.  Truncating the
// Taylor series of that map gives a strong warm start for the polish phase.

bool concentric_balls(const PiecewiseObjective& obj, Point& center, double& r_w, double& r_x) {
    auto cx = obj.X().ball_center();
    auto cw = obj.W().ball_center();
    if (!cx || !cw || obj.dim() != 1) return false;
    if (dist(*cx, *cw) > 1e-12) return false;
    center = *cx;
    r_w = *obj.W().ball_radius();
    r_x = *obj.X().ball_radius();
    return true;
}

std::optional<AnalyticDisc> profile_disc(const Point& x, const Point& center, double rho_in,
                                         double rho_out, double taper, int degree) {
    const complexd rel = x.z[0] - center.z[0];
    const double rho0 = std::abs(rel);
    if (rho0 <= rho_in || rho0 >= rho_out) return std::nullopt;
    const double s = (std::log(rho0) - std::log(rho_out)) / (std::log(rho_in) - std::log(rho_out));
    const double plateau = M_PI * s - 0.5 * taper;
    if (plateau < 0.05 || s > 0.95) return std::nullopt;

    constexpr int M = 2048;
    std::vector<double> ell(M);
    for (int m = 0; m < M; ++m) {
        const double th = 2.0 * M_PI * m / M;
        const double d = std::abs(std::remainder(th - M_PI, 2.0 * M_PI));
        double chi = 0.0;
        if (d <= plateau)
            chi = 1.0;
        else if (d <= plateau + taper)
            chi = 0.5 * (1.0 + std::cos(M_PI * (d - plateau) / taper));
        ell[m] = std::log(rho_out) + (std::log(rho_in) - std::log(rho_out)) * chi;
    }
    double mean = 0.0;
    for (double v : ell) mean += v;
    mean /= M;
    for (double& v : ell) v += std::log(rho0) - mean;  // enforce f(0) = x exactly

    // Holomorphic extension H with Re H = ell on T, then boundary values of
    // exp(H) projected onto polynomials of the requested degree.
    const int K = std::min(M / 4, std::max(2 * degree, 32));
    std::vector<complexd> u_hat(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        complexd acc = 0.0;
        for (int m = 0; m < M; ++m)
            acc += ell[m] * std::polar(1.0, -2.0 * M_PI * k * m / M);
        u_hat[k] = acc / static_cast<double>(M);
    }
    const complexd phase = rho0 > 0 ? rel / rho0 : complexd(1.0, 0.0);
    std::vector<complexd> g(M);
    for (int m = 0; m < M; ++m) {
        complexd h = u_hat[0];
        for (int k = 1; k <= K; ++k) h += 2.0 * u_hat[k] * std::polar(1.0, 2.0 * M_PI * k * m / M);
        g[m] = phase * std::exp(h);
    }
    AnalyticDisc f;
    f.center = x;
    f.degree = degree;
    f.coeffs[0].resize(degree);
    for (int k = 1; k <= degree; ++k) {
        complexd acc = 0.0;
        for (int m = 0; m < M; ++m) acc += g[m] * std::polar(1.0, -2.0 * M_PI * k * m / M);
        f.coeffs[0][k - 1] = acc / static_cast<double>(M);
    }
    return f;
}

// Truncated scaled Blaschke factor r (z + a) / (1 + a z): a circle |f - c| = r
// with f(0) = x; a B2 certificate whenever r_w < r < r_x.
std::optional<AnalyticDisc> blaschke_disc(const Point& x, const Point& center, double r,
                                          int degree) {
    const complexd rel = x.z[0] - center.z[0];
    const double rho0 = std::abs(rel);
    const double a = rho0 / r;
    if (a >= 0.97 || degree < 2) return std::nullopt;
    const complexd phase = rho0 > 0 ? rel / rho0 : complexd(1.0, 0.0);
    // (z + a)/(1 + a z) = a + (1 - a^2) sum_{k>=1} (-a)^{k-1} z^k
    AnalyticDisc f;
    f.center = x;
    f.degree = degree;
    f.coeffs[0].resize(degree);
    double p = 1.0;
    for (int k = 1; k <= degree; ++k) {
        f.coeffs[0][k - 1] = phase * r * (1.0 - a * a) * p;
        p *= -a;
    }
    return f;
}

std::vector<AnalyticDisc> structured_seeds(const PiecewiseObjective& obj, const Point& x,
                                           int degree, Mode mode) {
    std::vector<AnalyticDisc> out;
    Point c;
    double r_w = 0.0, r_x = 0.0;
    if (!concentric_balls(obj, c, r_w, r_x)) return out;
    if (degree >= 8 && mode == Mode::all_discs) {
        for (double fi : {0.85, 0.9, 0.94})
            for (double fo : {0.97, 0.99})
                for (double w : {0.25, 0.4})
                    if (auto f = profile_disc(x, c, fi * r_w, fo * r_x, w, degree)) out.push_back(*f);
    }
    if (degree >= 2) {
        for (double t : {0.5, 0.35, 0.65})
            if (auto f = blaschke_disc(x, c, r_w + t * (r_x - r_w), degree)) out.push_back(*f);
    }
    return out;
}

// ---- restart schedule -------------------------------------------------------

SearchResult run_search(const PiecewiseObjective& obj, const Point& x, const SearchConfig& cfg,
                        Mode mode) {
    if (!obj.X().contains(x)) throw std::domain_error("disc search: center outside X");
    Scorer scorer(obj, x, cfg, mode);
    const double init_scale =
        std::max(1e-4, cfg.init_scale_factor * obj.X().signed_margin(x));

    SearchResult res;
    std::optional<AnalyticDisc> incumbent;

    // The constant disc is always scored first so the reported minimum is
    // bounded by phi(x) whenever the constant disc is feasible.
    scorer.evaluate(AnalyticDisc::constant(x));

    std::uint64_t seed_state = cfg.seed;
    for (int degree : cfg.degree_schedule) {
        const int dims = 2 * x.n * degree;
        long degree_evals = 0;

        std::vector<std::pair<std::vector<double>, double>> starts;  // params, simplex step
        starts.push_back({std::vector<double>(dims, 0.0), init_scale});
        if (incumbent) starts.push_back({disc_to_params(*incumbent, degree), 0.25 * init_scale});
        if (cfg.structured_seeds)
            for (const AnalyticDisc& f : structured_seeds(obj, x, degree, mode))
                starts.push_back({disc_to_params(f, degree), 0.25 * init_scale});
        std::mt19937_64 rng(splitmix(seed_state));
        std::normal_distribution<double> gauss;
        while (static_cast<int>(starts.size()) < cfg.restarts) {
            std::vector<double> p(dims);
            for (double& v : p) v = init_scale * gauss(rng);
            starts.push_back({std::move(p), init_scale});
        }
        if (static_cast<int>(starts.size()) > cfg.restarts)
            starts.resize(std::max(cfg.restarts, 1));

        for (std::size_t r = 0; r < starts.size(); ++r) {
            const long feas_before = scorer.feasible_count;
            auto fn = [&](const std::vector<double>& params) {
                return scorer.evaluate(params_to_disc(x, degree, params)).score;
            };
            NelderMeadOptions opt;
            opt.max_evals = cfg.max_evals;
            opt.f_tol = cfg.tol;
            opt.x_tol = cfg.tol;
            auto outcome = nelder_mead(fn, starts[r].first, starts[r].second, opt);
            degree_evals += outcome.evals;
            res.restart_rows.push_back(RestartRow{degree, static_cast<int>(r), outcome.evals,
                                                  scorer.best_value,
                                                  scorer.feasible_count > feas_before});
        }

        incumbent = scorer.best;
        res.trace.push_back(DegreeTrace{degree, scorer.best_value, degree_evals});
    }

    res.feasible_count = scorer.feasible_count;
    res.infeasible_count = scorer.infeasible_count;
    if (scorer.best) {
        res.has_feasible = true;
        res.best_disc = *scorer.best;
        res.best_class = classify(res.best_disc, obj);
        // Reported value comes from the public quadrature path, not the
        // penalized scorer.
        res.value = poisson_mean(res.best_disc, obj, CircleQuadrature(cfg.quadrature_m));
    } else {
        res.has_feasible = false;
        res.value = kInf;
    }
    return res;
}

}  // namespace

SearchResult eh_estimate(const PiecewiseObjective& obj, const Point& x, const SearchConfig& cfg) {
    return run_search(obj, x, cfg, Mode::all_discs);
}

SearchResult f_estimate(const PiecewiseObjective& obj, const Point& x, const SearchConfig& cfg) {
    return run_search(obj, x, cfg, Mode::class_restricted);
}

CoverageSearch find_covering_disc(const PiecewiseObjective& obj, const Point& x,
                                  const SearchConfig& cfg) {
    CoverageSearch out;
    // Constant discs cover X away from the boundary of W.
    const AnalyticDisc c = AnalyticDisc::constant(x);
    DiscClass cls = classify(c, obj);
    if (cls.label == DiscLabel::B1 || cls.label == DiscLabel::B2) {
        out.found = true;
        out.cls = cls;
        out.disc = c;
        out.best_margin = std::max(cls.margin_w, cls.margin_outer);
        return out;
    }
    out.best_margin = std::max(cls.margin_w, cls.margin_outer);

    Scorer scorer(obj, x, cfg, Mode::class_restricted);
    const double init_scale = std::max(1e-4, cfg.init_scale_factor * obj.X().signed_margin(x));
    double best_margin = out.best_margin;
    std::optional<AnalyticDisc> best;

    std::uint64_t seed_state = cfg.seed ^ 0xabcdef12ull;
    for (int degree : cfg.degree_schedule) {
        if (degree < 1) continue;
        const int dims = 2 * x.n * degree;
        std::vector<std::vector<double>> starts;
        if (cfg.structured_seeds)
            for (const AnalyticDisc& f : structured_seeds(obj, x, degree, Mode::class_restricted))
                starts.push_back(disc_to_params(f, degree));
        std::mt19937_64 rng(splitmix(seed_state));
        std::normal_distribution<double> gauss;
        while (static_cast<int>(starts.size()) < std::max(1, cfg.restarts / 2)) {
            std::vector<double> p(dims);
            for (double& v : p) v = init_scale * gauss(rng);
            starts.push_back(std::move(p));
        }
        for (auto& start : starts) {
            auto fn = [&](const std::vector<double>& params) {
                const AnalyticDisc f = params_to_disc(x, degree, params);
                const auto e = scorer.evaluate(f);
                const double bm = std::max(e.margin_w, e.margin_outer);
                if (e.range_margin >= kFeasibilityMargin && bm > best_margin) {
                    best_margin = bm;
                    best = f;
                }
                const double gap = std::max(0.0, kFeasibilityMargin - e.range_margin);
                return -bm + cfg.penalty_weight * gap * gap;
            };
            NelderMeadOptions opt;
            opt.max_evals = cfg.max_evals;
            opt.f_tol = cfg.tol;
            opt.x_tol = cfg.tol;
            nelder_mead(fn, start, 0.5 * init_scale, opt);
            if (best_margin >= kFeasibilityMargin) break;
        }
        if (best_margin >= kFeasibilityMargin) break;
    }

    out.best_margin = best_margin;
    if (best && best_margin >= kFeasibilityMargin) {
        out.found = true;
        out.disc = *best;
        out.cls = classify(out.disc, obj);
    }
    return out;
}

UscProbeResult usc_probe(const PiecewiseObjective& obj, const std::vector<Point>& points,
                         const SearchConfig& cfg) {
    if (points.size() < 2) throw std::invalid_argument("usc_probe: need a sequence plus its limit");
    UscProbeResult out;
    out.values.reserve(points.size());
    for (const Point& p : points) out.values.push_back(f_estimate(obj, p, cfg).value);
    const double at_limit = out.values.back();
    double limsup = -kInf;
    for (std::size_t i = 0; i + 1 < out.values.size(); ++i) limsup = std::max(limsup, out.values[i]);
    out.defect = std::max(0.0, limsup - at_limit);
    return out;
}

std::string search_result_to_json(const SearchResult& r) {
    nlohmann::json j;
    j["has_feasible"] = r.has_feasible;
    if (std::isinf(r.value))
        j["value"] = r.value < 0 ? "-inf" : "inf";
    else
        j["value"] = r.value;
    j["feasible_count"] = r.feasible_count;
    j["infeasible_count"] = r.infeasible_count;
    if (r.has_feasible) {
        j["best_disc"] = nlohmann::json::parse(disc_to_json(r.best_disc));
        j["best_class"] = to_string(r.best_class.label);
    }
    nlohmann::json trace = nlohmann::json::array();
    for (const DegreeTrace& t : r.trace)
        trace.push_back({{"degree", t.degree}, {"best_value", t.best_value}, {"evals", t.evals}});
    j["trace"] = trace;
    return j.dump(2);
}

std::string trace_to_csv(const SearchResult& r) {
    std::string out = "# schema=1\ndegree,restart,evals,best_value,feasible\n";
    char buf[128];
    for (const RestartRow& row : r.restart_rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%ld,%.17g,%d\n", row.degree, row.restart, row.evals,
                      row.best_value, row.feasible ? 1 : 0);
        out += buf;
    }
    return out;
}

}  // namespace pluri
