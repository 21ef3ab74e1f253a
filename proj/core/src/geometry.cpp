#include "pluri/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pluri {

double Point::norm() const { return std::sqrt(norm2()); }

Point operator+(const Point& a, const Point& b) {
    require_same_dim(a, b);
    Point r = a;
    r.z[0] += b.z[0];
    if (r.n == 2) r.z[1] += b.z[1];
    return r;
}

Point operator-(const Point& a, const Point& b) {
    require_same_dim(a, b);
    Point r = a;
    r.z[0] -= b.z[0];
    if (r.n == 2) r.z[1] -= b.z[1];
    return r;
}

Point operator*(complexd s, const Point& a) {
    Point r = a;
    r.z[0] *= s;
    if (r.n == 2) r.z[1] *= s;
    return r;
}

double dist(const Point& a, const Point& b) { return (a - b).norm(); }

void require_same_dim(const Point& a, const Point& b) {
    if (a.n != b.n) throw std::invalid_argument("dimension mismatch between points");
}

namespace {

double dist_point_segment(complexd p, complexd a, complexd b) {
    const complexd ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p - a) * std::conj(ab)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

double cusp_profile(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// Lipschitz bound of exp(-1/x) on (0, x_max]; the derivative peaks at x = 1/2.
double cusp_lipschitz(double x_max) {
    auto dg = [](double x) { return std::exp(-1.0 / x) / (x * x); };
    return x_max >= 0.5 ? dg(0.5) : dg(x_max);
}

}  // namespace

struct Domain::Impl {
    Kind kind;
    int n = 1;
    std::string label;
    // atomic parameters
    Point center{};
    double r0 = 0.0, r1 = 0.0;  // radius / inner-outer / polydisc radii
    complexd slit_a{}, slit_b{};
    double x_max = 0.0;
    // composite children
    std::vector<Domain> children;
};

namespace {

Domain wrap(Domain::Impl impl) { return Domain(std::make_shared<Domain::Impl>(std::move(impl))); }

}  // namespace

Domain Domain::ball(Point center, double radius, std::string label) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
    Impl i;
    i.kind = Kind::ball;
    i.n = center.n;
    i.center = center;
    i.r0 = radius;
    i.label = std::move(label);
    return wrap(std::move(i));
}

Domain Domain::annulus(Point center, double r_in, double r_out, std::string label) {
    if (!(0.0 < r_in && r_in < r_out)) throw std::invalid_argument("annulus: need 0 < r_in < r_out");
    Impl i;
    i.kind = Kind::annulus;
    i.n = center.n;
    i.center = center;
    i.r0 = r_in;
    i.r1 = r_out;
    i.label = std::move(label);
    return wrap(std::move(i));
}

Domain Domain::polydisc(Point center, double r1, double r2, std::string label) {
    if (center.n != 2) throw std::invalid_argument("polydisc: requires n = 2");
    if (!(r1 > 0.0 && r2 > 0.0)) throw std::invalid_argument("polydisc: radii must be positive");
    Impl i;
    i.kind = Kind::polydisc;
    i.n = 2;
    i.center = center;
    i.r0 = r1;
    i.r1 = r2;
    i.label = std::move(label);
    return wrap(std::move(i));
}

Domain Domain::slit_disc(complexd center, double radius, complexd slit_a, complexd slit_b,
                         std::string label) {
    if (!(radius > 0.0)) throw std::invalid_argument("slit_disc: radius must be positive");
    Impl i;
    i.kind = Kind::slit_disc;
    i.n = 1;
    i.center = Point::c1(center);
    i.r0 = radius;
    i.slit_a = slit_a;
    i.slit_b = slit_b;
    i.label = std::move(label);
    return wrap(std::move(i));
}

Domain Domain::cusp_region(double x_max, std::string label) {
    if (!(x_max > 0.0)) throw std::invalid_argument("cusp_region: x_max must be positive");
    Impl i;
    i.kind = Kind::cusp_region;
    i.n = 1;
    i.x_max = x_max;
    i.label = std::move(label);
    return wrap(std::move(i));
}

namespace {

Domain composite(Domain::Kind kind, Domain a, Domain b, std::string label) {
    if (a.dim() != b.dim()) throw std::invalid_argument("composite domain: dimension mismatch");
    Domain::Impl i;
    i.kind = kind;
    i.n = a.dim();
    i.label = std::move(label);
    i.children = {std::move(a), std::move(b)};
    return wrap(std::move(i));
}

}  // namespace

Domain Domain::difference(Domain a, Domain b, std::string label) {
    return composite(Kind::difference, std::move(a), std::move(b), std::move(label));
}
Domain Domain::intersection(Domain a, Domain b, std::string label) {
    return composite(Kind::intersection, std::move(a), std::move(b), std::move(label));
}
Domain Domain::set_union(Domain a, Domain b, std::string label) {
    return composite(Kind::set_union, std::move(a), std::move(b), std::move(label));
}

Domain::Kind Domain::kind() const { return impl_->kind; }
int Domain::dim() const { return impl_->n; }
const std::string& Domain::label() const { return impl_->label; }

int Domain::nesting_depth() const {
    int d = 0;
    for (const Domain& c : impl_->children) d = std::max(d, 1 + c.nesting_depth());
    return d;
}

std::optional<Point> Domain::ball_center() const {
    if (impl_->kind == Kind::ball) return impl_->center;
    return std::nullopt;
}
std::optional<double> Domain::ball_radius() const {
    if (impl_->kind == Kind::ball) return impl_->r0;
    return std::nullopt;
}

double Domain::signed_margin(const Point& p) const {
    const Impl& i = *impl_;
    if (p.n != i.n) throw std::invalid_argument("signed_margin: dimension mismatch");
    switch (i.kind) {
        case Kind::ball:
            return i.r0 - dist(p, i.center);
        case Kind::annulus: {
            const double d = dist(p, i.center);
            return std::min(d - i.r0, i.r1 - d);
        }
        case Kind::polydisc:
            return std::min(i.r0 - std::abs(p.z[0] - i.center.z[0]),
                            i.r1 - std::abs(p.z[1] - i.center.z[1]));
        case Kind::slit_disc: {
            const double mb = i.r0 - std::abs(p.z[0] - i.center.z[0]);
            const double ds = dist_point_segment(p.z[0], i.slit_a, i.slit_b);
            return std::min(mb, ds);
        }
        case Kind::cusp_region: {
            const double x = p.z[0].real();
            const double y = std::abs(p.z[0].imag());
            const double L = cusp_lipschitz(i.x_max);
            const double band = (cusp_profile(x) - y) / (1.0 + L);
            return std::min({x, i.x_max - x, band});
        }
        case Kind::difference:
            return std::min(i.children[0].signed_margin(p), -i.children[1].signed_margin(p));
        case Kind::intersection:
            return std::min(i.children[0].signed_margin(p), i.children[1].signed_margin(p));
        case Kind::set_union:
            return std::max(i.children[0].signed_margin(p), i.children[1].signed_margin(p));
    }
    throw std::logic_error("unreachable domain kind");
}

namespace {

std::vector<Point> circle_nodes(const Point& center, double radius, int k, double phase = 0.0) {
    std::vector<Point> out;
    out.reserve(k);
    for (int j = 0; j < k; ++j) {
        const double th = phase + 2.0 * M_PI * j / k;
        Point p = center;
        p.z[0] += std::polar(radius, th);
        out.push_back(p);
    }
    return out;
}

// Deterministic points on the sphere ||p - c|| = r in C^2 (= S^3 in R^4).
std::vector<Point> sphere_nodes(const Point& center, double radius, int k) {
    std::mt19937_64 rng(0x5bd1e995u ^ static_cast<std::uint64_t>(k));
    std::normal_distribution<double> gauss;
    std::vector<Point> out;
    out.reserve(k);
    for (int j = 0; j < k; ++j) {
        double v[4];
        double nrm = 0.0;
        do {
            nrm = 0.0;
            for (double& c : v) {
                c = gauss(rng);
                nrm += c * c;
            }
        } while (nrm < 1e-12);
        nrm = std::sqrt(nrm);
        Point p = center;
        p.z[0] += complexd(v[0], v[1]) * (radius / nrm);
        p.z[1] += complexd(v[2], v[3]) * (radius / nrm);
        out.push_back(p);
    }
    return out;
}

}  // namespace

std::vector<Point> Domain::boundary_sample(int k) const {
    const Impl& i = *impl_;
    if (k < 8) throw std::invalid_argument("boundary_sample: k must be >= 8");
    switch (i.kind) {
        case Kind::ball:
            return i.n == 1 ? circle_nodes(i.center, i.r0, k) : sphere_nodes(i.center, i.r0, k);
        case Kind::annulus: {
            if (i.n != 1) throw std::invalid_argument("boundary_sample: annulus supported in C^1");
            auto out = circle_nodes(i.center, i.r0, k / 2);
            auto outer = circle_nodes(i.center, i.r1, k - k / 2);
            out.insert(out.end(), outer.begin(), outer.end());
            return out;
        }
        case Kind::polydisc: {
            std::mt19937_64 rng(0x2545f491u ^ static_cast<std::uint64_t>(k));
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            std::vector<Point> out;
            out.reserve(k);
            for (int j = 0; j < k; ++j) {
                const bool face1 = j % 2 == 0;
                const double th = 2.0 * M_PI * (j / 2) / std::max(1, k / 2);
                const double rho = std::sqrt(unif(rng));
                const double psi = 2.0 * M_PI * unif(rng);
                Point p = i.center;
                if (face1) {
                    p.z[0] += std::polar(i.r0, th);
                    p.z[1] += std::polar(i.r1 * rho, psi);
                } else {
                    p.z[0] += std::polar(i.r0 * rho, psi);
                    p.z[1] += std::polar(i.r1, th);
                }
                out.push_back(p);
            }
            return out;
        }
        case Kind::slit_disc: {
            const int kc = k - k / 2;
            auto out = circle_nodes(i.center, i.r0, kc);
            const int ks = k / 2;
            for (int j = 0; j < ks; ++j) {
                const double t = (j + 0.5) / ks;
                out.push_back(Point::c1(i.slit_a + t * (i.slit_b - i.slit_a)));
            }
            return out;
        }
        case Kind::cusp_region: {
            std::vector<Point> out;
            out.reserve(k);
            const int kc = std::max(1, k / 10);   // cap segment x = x_max
            const int kt = (k - kc) / 2;          // top curve
            const int kb = k - kc - kt;           // bottom curve
            for (int j = 0; j < kt; ++j) {
                const double x = i.x_max * (j + 0.5) / kt;
                out.push_back(Point::c1(complexd(x, cusp_profile(x))));
            }
            for (int j = 0; j < kb; ++j) {
                const double x = i.x_max * (j + 0.5) / kb;
                out.push_back(Point::c1(complexd(x, -cusp_profile(x))));
            }
            const double ymax = cusp_profile(i.x_max);
            for (int j = 0; j < kc; ++j) {
                const double y = ymax * (2.0 * (j + 0.5) / kc - 1.0);
                out.push_back(Point::c1(complexd(i.x_max, y)));
            }
            return out;
        }
        case Kind::difference:
        case Kind::intersection:
        case Kind::set_union: {
            if (nesting_depth() > 2)
                throw std::invalid_argument("boundary_sample: composite nesting depth > 2");
            // Candidates live on child boundaries; keep those on the
            // composite boundary and interleave children to cover components.
            for (int over = 4; over <= 4096; over *= 2) {
                std::array<std::vector<Point>, 2> cand;
                for (int c = 0; c < 2; ++c) {
                    auto pts = i.children[c].boundary_sample(std::max(8, over * k));
                    for (const Point& p : pts)
                        if (std::abs(signed_margin(p)) <= 1e-9) cand[c].push_back(p);
                }
                std::vector<Point> out;
                std::size_t a = 0, b = 0;
                while (static_cast<int>(out.size()) < k && (a < cand[0].size() || b < cand[1].size())) {
                    if (a < cand[0].size()) out.push_back(cand[0][a++]);
                    if (static_cast<int>(out.size()) < k && b < cand[1].size())
                        out.push_back(cand[1][b++]);
                }
                if (static_cast<int>(out.size()) == k) return out;
            }
            throw std::runtime_error("boundary_sample: could not cover composite boundary");
        }
    }
    throw std::logic_error("unreachable domain kind");
}

std::size_t GridSpec::node_count() const {
    std::size_t total = 1;
    for (const GridAxis& a : axes) total *= static_cast<std::size_t>(a.res);
    return total;
}

double GridSpec::step(int axis) const {
    const GridAxis& a = axes.at(axis);
    return a.res > 1 ? (a.hi - a.lo) / (a.res - 1) : 0.0;
}

Point GridSpec::node_point(std::size_t flat) const {
    const int d = static_cast<int>(axes.size());
    std::array<double, 4> x{};
    for (int ax = d - 1; ax >= 0; --ax) {
        const auto res = static_cast<std::size_t>(axes[ax].res);
        const std::size_t idx = flat % res;
        flat /= res;
        x[ax] = axes[ax].res > 1 ? axes[ax].lo + (axes[ax].hi - axes[ax].lo) * idx / (axes[ax].res - 1)
                                 : 0.5 * (axes[ax].lo + axes[ax].hi);
    }
    Point p;
    p.n = d / 2;
    p.z[0] = complexd(x[0], x[1]);
    if (p.n == 2) p.z[1] = complexd(x[2], x[3]);
    return p;
}

bool GridSpec::operator==(const GridSpec& o) const {
    if (axes.size() != o.axes.size()) return false;
    for (std::size_t j = 0; j < axes.size(); ++j)
        if (axes[j].lo != o.axes[j].lo || axes[j].hi != o.axes[j].hi || axes[j].res != o.axes[j].res)
            return false;
    return restriction.has_value() == o.restriction.has_value();
}

std::vector<GridNode> make_grid(const GridSpec& spec) {
    if (spec.axes.size() != 2 && spec.axes.size() != 4)
        throw std::invalid_argument("make_grid: need 2n axes with n in {1,2}");
    for (const GridAxis& a : spec.axes) {
        if (a.res < 2) throw std::invalid_argument("make_grid: resolution must be >= 2 per axis");
        if (!(a.lo < a.hi)) throw std::invalid_argument("make_grid: empty axis interval");
    }
    if (spec.restriction && spec.restriction->dim() != spec.dim())
        throw std::invalid_argument("make_grid: restriction dimension mismatch");

    const std::size_t total = spec.node_count();
    std::vector<GridNode> nodes;
    nodes.reserve(total);
    std::size_t interior = 0;
    for (std::size_t flat = 0; flat < total; ++flat) {
        Point p = spec.node_point(flat);
        const bool in = !spec.restriction || spec.restriction->contains(p);
        interior += in ? 1 : 0;
        nodes.push_back(GridNode{flat, p, in});
    }
    if (interior == 0) throw std::runtime_error("make_grid: empty interior under restriction");
    return nodes;
}

}  // namespace pluri
