#include "pluri/objective.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <stdexcept>

namespace pluri {

namespace {

constexpr double kBoundaryBand = 1e-12;

std::uint64_t hash_bits(std::uint64_t h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    h ^= bits + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

std::uint64_t sample_seed(const Point& p, const std::vector<double>& radii) {
    std::uint64_t h = 0x6a09e667f3bcc908ull;
    h = hash_bits(h, p.z[0].real());
    h = hash_bits(h, p.z[0].imag());
    if (p.n == 2) {
        h = hash_bits(h, p.z[1].real());
        h = hash_bits(h, p.z[1].imag());
    }
    for (double r : radii) h = hash_bits(h, r);
    return h;
}

// Uniform point of the real ball B(p, r) in R^{2n}.
Point ball_sample(const Point& p, double r, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = 2 * p.n;
    std::array<double, 4> v{};
    double nrm = 0.0;
    do {
        nrm = 0.0;
        for (int j = 0; j < d; ++j) {
            v[j] = gauss(rng);
            nrm += v[j] * v[j];
        }
    } while (nrm < 1e-12);
    const double scale = r * std::pow(unif(rng), 1.0 / d) / std::sqrt(nrm);
    Point q = p;
    q.z[0] += complexd(v[0] * scale, v[1] * scale);
    if (p.n == 2) q.z[1] += complexd(v[2] * scale, v[3] * scale);
    return q;
}

}  // namespace

std::vector<double> default_star_radii() {
    std::vector<double> r;
    double v = 0.1;
    for (int k = 0; k < 10; ++k, v *= 0.5) r.push_back(v);
    return r;
}

UscResult usc_star(const ExprFn& e, const Domain& d, const Point& p,
                   const std::vector<double>& radii, int min_samples) {
    if (radii.size() < 8) throw std::invalid_argument("usc_star: need >= 8 radius levels");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] < radii[k - 1]) || !(radii[k] > 0.0))
            throw std::invalid_argument("usc_star: radii must be strictly decreasing and positive");

    std::mt19937_64 rng(sample_seed(p, radii));
    UscResult res{0.0, false, {}};
    bool any_level = false;
    double last = 0.0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        const double r = radii[k];
        const int want = std::max(min_samples, min_samples + 8 * static_cast<int>(k));
        double sup = -std::numeric_limits<double>::infinity();
        int got = 0;
        for (int attempt = 0; attempt < 256 * want && got < want; ++attempt) {
            Point q = ball_sample(p, r, rng);
            if (!d.contains(q)) continue;
            ++got;
            double v;
            try {
                v = eval_expr(e, q);
            } catch (const eval_error&) {
                continue;
            }
            sup = std::max(sup, v);
        }
        if (got == 0) {
            if (k == 0) throw std::runtime_error("usc_star: p not in closure of domain");
            continue;  // keep previous level's value
        }
        if (any_level && std::abs(sup - last) > 0.1) res.unstable = true;
        any_level = true;
        last = sup;
        res.level_values.push_back(sup);
    }
    if (!any_level) throw std::runtime_error("usc_star: no samples at any level");
    res.value = last;
    return res;
}

PiecewiseObjective::PiecewiseObjective(Domain X, Domain W, ExprFn phi1, ExprFn phi2,
                                       std::optional<ExprFn> boundary_values,
                                       std::vector<double> star_radii)
    : X_(std::move(X)),
      W_(std::move(W)),
      outer_(Domain::difference(X_, W_, "X\\clW")),
      phi1_(std::move(phi1)),
      phi2_(std::move(phi2)),
      boundary_(std::move(boundary_values)),
      star_radii_(std::move(star_radii)) {
    if (X_.dim() != W_.dim())
        throw std::invalid_argument("PiecewiseObjective: X and W dimension mismatch");
    if (phi1_.max_var_index() > X_.dim() || phi2_.max_var_index() > X_.dim())
        throw std::invalid_argument("PiecewiseObjective: expression variable exceeds dimension");
}

double PiecewiseObjective::eval_phi(const Point& p) const {
    if (!X_.contains(p)) throw std::domain_error("eval_phi: point outside X");
    const double mw = W_.signed_margin(p);
    if (mw > kBoundaryBand) return eval_expr(phi2_, p);
    if (mw < -kBoundaryBand) return eval_expr(phi1_, p);
    if (boundary_) return eval_expr(*boundary_, p);
    const double s1 = usc_star(phi1_, outer_, p, star_radii_).value;
    const double s2 = usc_star(phi2_, W_, p, star_radii_).value;
    return std::min(s1, s2);
}

void PiecewiseObjective::validate(int samples) const {
    std::mt19937_64 rng(0xc0ffee11u);
    // W subset of X: random points of W's bounding region that land in W must lie in X.
    int found = 0;
    const Point c = W_.ball_center().value_or(Point{X_.dim(), {}});
    double r = W_.ball_radius().value_or(1.0) * 1.0;
    for (int j = 0; j < 64 * samples && found < samples; ++j) {
        Point q = ball_sample(c, r * 1.5, rng);
        if (!W_.contains(q)) continue;
        ++found;
        if (!X_.contains(q)) throw std::runtime_error("objective: W is not contained in X");
    }
    if (found == 0) throw std::runtime_error("objective: could not sample W");
    // W != X: exhibit one point of X outside cl(W).
    const Point cx = X_.ball_center().value_or(Point{X_.dim(), {}});
    const double rx = X_.ball_radius().value_or(2.0);
    for (int j = 0; j < 64 * samples; ++j) {
        Point q = ball_sample(cx, rx, rng);
        if (X_.contains(q) && outer_.contains(q)) return;
    }
    throw std::runtime_error("objective: found no point of X outside cl(W)");
}

}  // namespace pluri
