#include "pluri/max_principle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

namespace pluri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Average of u over the circle p + r e^{i t} dir, quadrature count m.
// Returns -inf when any node evaluates to -inf (callers shrink and retry).
double circle_average(const ExprFn& e, const Point& p, const Point& dir, double r, int m) {
    double sum = 0.0;
    for (int k = 0; k < m; ++k) {
        const complexd w = std::polar(r, 2.0 * M_PI * k / m);
        Point q = p;
        q.z[0] += w * dir.z[0];
        if (p.n == 2) q.z[1] += w * dir.z[1];
        const double v = eval_expr(e, q);
        if (v == -kInf) return -kInf;
        sum += v;
    }
    return sum / m;
}

// Adaptive circle average: double the node count until two levels agree to
// 1e-12, else report failure so the caller can shrink the radius.  Harmonic
// samples sit at exact equality, so the tolerance here must be far tighter
// than the certification slack.
bool settled_average(const ExprFn& e, const Point& p, const Point& dir, double r, double* out) {
    int m = 256;
    double prev = circle_average(e, p, dir, r, m);
    while (m < (1 << 16)) {
        m *= 2;
        const double next = circle_average(e, p, dir, r, m);
        if (prev == -kInf || next == -kInf) return false;
        if (std::abs(next - prev) <= 1e-12) {
            *out = next;
            return true;
        }
        prev = next;
    }
    return false;
}

Point random_unit_dir(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Point d;
    d.n = n;
    double nn = 0.0;
    do {
        d.z[0] = complexd(gauss(rng), gauss(rng));
        if (n == 2) d.z[1] = complexd(gauss(rng), gauss(rng));
        nn = d.norm();
    } while (nn < 1e-9);
    return (1.0 / nn) * d;
}

Point random_interior_point(const Domain& X, std::mt19937_64& rng) {
    const Point c = X.ball_center().value_or(Point::c1(0.0));
    const double R = X.ball_radius().value_or(2.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int tries = 0; tries < 4096; ++tries) {
        const Point d = random_unit_dir(X.dim(), rng);
        const double r = R * std::pow(uni(rng), 1.0 / (2.0 * X.dim()));
        const Point p = c + r * d;
        if (X.signed_margin(p) > 1e-3) return p;
    }
    throw std::runtime_error("certify_psh: could not sample interior points");
}

GridSpec square_grid(double lo, double hi, int res, int n) {
    GridSpec g;
    for (int ax = 0; ax < 2 * n; ++ax) g.axes.push_back({lo, hi, res});
    return g;
}

}  // namespace

SubMeanCheck certify_psh(const PshSample& u, const Domain& X, int points, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    SubMeanCheck chk;
    chk.pass = true;
    const int lines = X.dim() == 2 ? 8 : 1;
    for (int i = 0; i < points; ++i) {
        const Point p = random_interior_point(X, rng);
        const double margin = X.signed_margin(p);
        const double value = eval_expr(u.expr, p);
        for (int l = 0; l < lines; ++l) {
            const Point dir = random_unit_dir(X.dim(), rng);
            double r = (0.1 + 0.4 * uni(rng)) * margin;
            double avg = 0.0;
            bool ok = false;
            for (int shrink = 0; shrink < 8 && !ok; ++shrink) {
                ok = settled_average(u.expr, p, dir, r, &avg);
                if (!ok) r *= 0.7;
            }
            if (!ok) continue;  // average never settled; skip this trial
            ++chk.trials;
            const double violation = value - avg;
            chk.worst_violation = std::max(chk.worst_violation, violation);
            if (violation > 1e-8) chk.pass = false;
        }
    }
    return chk;
}

SupCompare sup_compare(const PshSample& u, const Domain& U, const Domain& X, const GridSpec& grid,
                       int boundary_k) {
    const auto boundary = U.boundary_sample(boundary_k);
    for (const Point& b : boundary)
        if (X.signed_margin(b) <= 0.0)
            throw std::invalid_argument("sup_compare: U is not compactly contained in X");

    SupCompare out;
    out.sup_U = -kInf;
    out.sup_boundary = -kInf;
    const std::size_t total = grid.node_count();
    for (std::size_t i = 0; i < total; ++i) {
        const Point p = grid.node_point(i);
        if (U.contains(p)) out.sup_U = std::max(out.sup_U, eval_expr(u.expr, p));
    }
    for (const Point& b : boundary) out.sup_boundary = std::max(out.sup_boundary, eval_expr(u.expr, b));
    if (out.sup_U == -kInf)
        throw std::invalid_argument("sup_compare: no grid node falls inside U; refine grid");
    out.defect = out.sup_U - out.sup_boundary;
    return out;
}

std::vector<CatalogPair> builtin_catalog() {
    const Domain X1 = Domain::ball(Point::c1(0.0), 1.0, "X");
    const GridSpec g1 = square_grid(-1.0, 1.0, 201, 1);
    std::vector<CatalogPair> cat;

    cat.push_back({{"abs2", parse_expr("abs2(z1)"), "squared modulus of z"},
                   Domain::annulus(Point::c1(0.0), 0.3, 0.8, "annulus"), X1, g1, 512});
    cat.push_back({{"re", parse_expr("re(z1)"), "pluriharmonic"},
                   Domain::ball(Point::c1(0.1), 0.5, "offset ball"), X1, g1, 512});
    cat.push_back({{"log_dist", parse_expr("log((re(z1)-0.9)^2+im(z1)^2)/2"),
                    "log modulus of the holomorphic z-0.9"},
                   Domain::ball(Point::c1(0.0), 0.5, "ball"), X1, g1, 512});
    cat.push_back({{"exp_re", parse_expr("exp(re(z1))"), "convex increasing of pluriharmonic"},
                   Domain::ball(Point::c1(0.0), 0.5, "ball"), X1, g1, 512});
    cat.push_back({{"max_mix", parse_expr("max(abs2(z1),re(z1)+0.1)"),
                    "max of certified samples"},
                   Domain::set_union(Domain::ball(Point::c1(-0.5), 0.2),
                                     Domain::ball(Point::c1(0.4), 0.2), "two balls"),
                   X1, g1, 512});
    cat.push_back({{"abs2_sq", parse_expr("abs2(z1)^2"), "convex increasing of abs2"},
                   Domain::slit_disc(0.0, 0.6, 0.0, 0.5, "slit disc"), X1, g1, 512});

    const Domain X2 = Domain::ball(Point::c2(0.0, 0.0), 1.0, "X2");
    cat.push_back({{"norm2", parse_expr("abs2(z1)+abs2(z2)"), "squared norm"},
                   Domain::ball(Point::c2(0.0, 0.0), 0.7, "ball in C^2"), X2,
                   square_grid(-1.0, 1.0, 41, 2), 1024});
    return cat;
}

std::vector<SuiteRow> run_suite(const std::vector<CatalogPair>& catalog, double tol) {
    std::vector<SuiteRow> rows;
    for (const CatalogPair& pair : catalog) {
        const SupCompare c = sup_compare(pair.u, pair.U, pair.X, pair.grid, pair.boundary_k);
        SuiteRow row;
        row.sample = pair.u.name;
        row.set = pair.U.label();
        row.sup_U = c.sup_U;
        row.sup_boundary = c.sup_boundary;
        row.defect = c.defect;
        row.pass = std::abs(c.defect) <= tol;
        rows.push_back(std::move(row));
    }
    return rows;
}

bool suite_passes(const std::vector<SuiteRow>& rows) {
    return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
}

std::string suite_to_csv(const std::vector<SuiteRow>& rows) {
    std::string out = "# schema=1\nsample,set,sup_U,sup_boundary,defect,pass\n";
    char buf[256];
    for (const SuiteRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%.17g,%d\n", r.sample.c_str(),
                      r.set.c_str(), r.sup_U, r.sup_boundary, r.defect, r.pass ? 1 : 0);
        out += buf;
    }
    return out;
}

}  // namespace pluri
