#include "pluri/perron.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace pluri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::array<double, 4> point_coords(const Point& p) {
    return {p.z[0].real(), p.z[0].imag(), p.n == 2 ? p.z[1].real() : 0.0,
            p.n == 2 ? p.z[1].imag() : 0.0};
}

Point coords_point(const std::array<double, 4>& x, int n) {
    Point p;
    p.n = n;
    p.z[0] = complexd(x[0], x[1]);
    if (n == 2) p.z[1] = complexd(x[2], x[3]);
    return p;
}

}  // namespace

// Precomputed multilinear taps for one (direction, radius, angle) sample at
// nodes far enough from the grid border and from the domain boundary.
struct PerronRelaxer::Stencil {
    std::size_t dir;        // index into direction table
    double radius;          // absolute radius
    // per angle: 2^dims taps (flat offset, weight)
    std::vector<std::vector<std::pair<std::ptrdiff_t, double>>> angle_taps;
    // admissible node index window per axis for the fast path
    std::array<std::ptrdiff_t, 4> lo{};
    std::array<std::ptrdiff_t, 4> hi{};
};

PerronRelaxer::PerronRelaxer(const Domain& X, const GridSpec& grid, const RelaxConfig& cfg,
                             ScalarField obstacle, ScalarField exterior_rule)
    : X_(X), grid_(grid), cfg_(cfg), obstacle_(std::move(obstacle)),
      exterior_(std::move(exterior_rule)) {
    dims_ = static_cast<int>(grid_.axes.size());
    if (dims_ != 2 && dims_ != 4) throw std::invalid_argument("PerronRelaxer: need 2n axes");
    shape_.resize(dims_);
    strides_.assign(dims_, 1);
    steps_.resize(dims_);
    for (int ax = 0; ax < dims_; ++ax) {
        shape_[ax] = static_cast<std::size_t>(grid_.axes[ax].res);
        steps_[ax] = grid_.step(ax);
    }
    for (int ax = dims_ - 2; ax >= 0; --ax)
        strides_[ax] = strides_[ax + 1] * static_cast<std::ptrdiff_t>(shape_[ax + 1]);
    h_min_ = *std::min_element(steps_.begin(), steps_.end());
    h_max_ = *std::max_element(steps_.begin(), steps_.end());

    const std::size_t total = grid_.node_count();
    obstacle_values_.resize(total);
    margins_.resize(total);
    interior_.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        const Point p = grid_.node_point(i);
        const double m = X_.signed_margin(p);
        margins_[i] = m;
        interior_[i] = m > 0.0 ? 1 : 0;
        obstacle_values_[i] = interior_[i] ? obstacle_(p) : exterior_(p);
    }

    // Direction table: n = 1 has the single complex line; n = 2 adds the
    // coordinate axes plus seeded random directions on the unit sphere of C^2.
    std::vector<std::array<double, 4>> dirs;
    if (dims_ == 2) {
        dirs.push_back({1.0, 0.0, 0.0, 0.0});
    } else {
        dirs.push_back({1.0, 0.0, 0.0, 0.0});
        dirs.push_back({0.0, 0.0, 1.0, 0.0});
        std::mt19937_64 rng(cfg_.seed);
        std::normal_distribution<double> gauss;
        for (int d = 0; d < cfg_.directions; ++d) {
            std::array<double, 4> v{};
            double nrm = 0.0;
            do {
                nrm = 0.0;
                for (double& c : v) {
                    c = gauss(rng);
                    nrm += c * c;
                }
            } while (nrm < 1e-12);
            for (double& c : v) c /= std::sqrt(nrm);
            dirs.push_back(v);
        }
    }
    dir_offsets_ = std::move(dirs);

    // Build fast-path stencils: one per (direction, radius).
    for (std::size_t d = 0; d < dir_offsets_.size(); ++d) {
        const complexd a1(dir_offsets_[d][0], dir_offsets_[d][1]);
        const complexd a2(dir_offsets_[d][2], dir_offsets_[d][3]);
        for (double rs : cfg_.radii_steps) {
            const double radius = rs * h_min_;
            Stencil st;
            st.dir = d;
            st.radius = radius;
            for (int ax = 0; ax < dims_; ++ax) {
                st.lo[ax] = 0;
                st.hi[ax] = static_cast<std::ptrdiff_t>(shape_[ax]) - 1;
            }
            for (int ang = 0; ang < cfg_.angular_nodes; ++ang) {
                const complexd w = std::polar(radius, 2.0 * M_PI * ang / cfg_.angular_nodes);
                const std::array<double, 4> off = {(w * a1).real(), (w * a1).imag(),
                                                   (w * a2).real(), (w * a2).imag()};
                std::array<std::ptrdiff_t, 4> base{};
                std::array<double, 4> frac{};
                for (int ax = 0; ax < dims_; ++ax) {
                    const double t = off[ax] / steps_[ax];
                    base[ax] = static_cast<std::ptrdiff_t>(std::floor(t));
                    frac[ax] = t - static_cast<double>(base[ax]);
                    st.lo[ax] = std::max(st.lo[ax], -base[ax]);
                    st.hi[ax] = std::min(st.hi[ax],
                                         static_cast<std::ptrdiff_t>(shape_[ax]) - 2 - base[ax]);
                }
                std::vector<std::pair<std::ptrdiff_t, double>> taps;
                const int corners = 1 << dims_;
                for (int c = 0; c < corners; ++c) {
                    std::ptrdiff_t off_flat = 0;
                    double wgt = 1.0;
                    for (int ax = 0; ax < dims_; ++ax) {
                        const int bit = (c >> ax) & 1;
                        off_flat += (base[ax] + bit) * strides_[ax];
                        wgt *= bit ? frac[ax] : 1.0 - frac[ax];
                    }
                    if (wgt != 0.0) taps.emplace_back(off_flat, wgt);
                }
                st.angle_taps.push_back(std::move(taps));
            }
            stencils_.push_back(std::move(st));
        }
    }
}

PerronRelaxer::~PerronRelaxer() = default;

EnvelopeGrid PerronRelaxer::initial_grid() const {
    EnvelopeGrid g;
    g.spec = grid_;
    g.values = obstacle_values_;
    g.interior = interior_;
    g.residual = kInf;
    return g;
}

double PerronRelaxer::interpolate(const EnvelopeGrid& g, const std::array<double, 4>& x) const {
    std::array<std::ptrdiff_t, 4> base{};
    std::array<double, 4> frac{};
    for (int ax = 0; ax < dims_; ++ax) {
        const GridAxis& a = grid_.axes[ax];
        if (x[ax] < a.lo || x[ax] > a.hi) return exterior_(coords_point(x, dims_ / 2));
        double t = (x[ax] - a.lo) / steps_[ax];
        std::ptrdiff_t b = static_cast<std::ptrdiff_t>(std::floor(t));
        b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(shape_[ax]) - 2);
        base[ax] = b;
        frac[ax] = t - static_cast<double>(b);
    }
    double sum = 0.0;
    const int corners = 1 << dims_;
    for (int c = 0; c < corners; ++c) {
        std::ptrdiff_t flat = 0;
        double wgt = 1.0;
        for (int ax = 0; ax < dims_; ++ax) {
            const int bit = (c >> ax) & 1;
            flat += (base[ax] + bit) * strides_[ax];
            wgt *= bit ? frac[ax] : 1.0 - frac[ax];
        }
        sum += wgt * g.values[flat];
    }
    return sum;
}

double PerronRelaxer::circle_average_slow(const EnvelopeGrid& g, const std::array<double, 4>& base,
                                          std::size_t dir, double radius) const {
    const complexd a1(dir_offsets_[dir][0], dir_offsets_[dir][1]);
    const complexd a2(dir_offsets_[dir][2], dir_offsets_[dir][3]);
    double sum = 0.0;
    for (int ang = 0; ang < cfg_.angular_nodes; ++ang) {
        const complexd w = std::polar(radius, 2.0 * M_PI * ang / cfg_.angular_nodes);
        std::array<double, 4> x = base;
        x[0] += (w * a1).real();
        x[1] += (w * a1).imag();
        if (dims_ == 4) {
            x[2] += (w * a2).real();
            x[3] += (w * a2).imag();
        }
        sum += interpolate(g, x);
    }
    return sum / cfg_.angular_nodes;
}

double PerronRelaxer::sweep(EnvelopeGrid& g) const {
    const std::size_t total = g.values.size();
    std::vector<double> next = g.values;
    double residual = 0.0;

    std::array<std::ptrdiff_t, 4> idx{};
    for (std::size_t flat = 0; flat < total; ++flat) {
        if (interior_[flat]) {
            const double margin = margins_[flat];
            double v = std::min(g.values[flat], obstacle_values_[flat]);
            for (const Stencil& st : stencils_) {
                const bool in_window = [&] {
                    for (int ax = 0; ax < dims_; ++ax)
                        if (idx[ax] < st.lo[ax] || idx[ax] > st.hi[ax]) return false;
                    return true;
                }();
                if (in_window && margin >= st.radius + 2.0 * h_max_) {
                    double sum = 0.0;
                    for (const auto& taps : st.angle_taps) {
                        double s = 0.0;
                        for (const auto& [off, wgt] : taps) s += wgt * g.values[flat + off];
                        sum += s;
                    }
                    v = std::min(v, sum / cfg_.angular_nodes);
                } else {
                    // Near the domain or grid boundary: shrink the circle to
                    // the available margin.
                    const double r = std::min(st.radius, 0.9 * margin);
                    if (r < 0.25 * h_min_) continue;
                    const Point p = grid_.node_point(flat);
                    v = std::min(v, circle_average_slow(g, point_coords(p), st.dir, r));
                }
            }
            residual = std::max(residual, g.values[flat] - v);
            next[flat] = v;
        }
        // advance multi-index (row-major, last axis fastest)
        for (int ax = dims_ - 1; ax >= 0; --ax) {
            if (++idx[ax] < static_cast<std::ptrdiff_t>(shape_[ax])) break;
            idx[ax] = 0;
        }
    }
    g.values = std::move(next);
    g.residual = residual;
    ++g.sweeps;
    return residual;
}

EnvelopeGrid PerronRelaxer::solve() const {
    EnvelopeGrid g = initial_grid();
    std::vector<double> check;
    for (long s = 0; s < cfg_.max_sweeps; ++s) {
        if (s % 100 == 0) check = g.values;
        const double r = sweep(g);
        if (s % 100 == 0) {
            for (std::size_t i = 0; i < check.size(); ++i)
                if (g.values[i] > check[i] + 1e-12)
                    throw std::logic_error("relaxation is not monotone");
        }
        if (r < cfg_.tol) {
            g.converged = true;
            break;
        }
    }
    return g;
}

double EnvelopeGrid::value_at(const Point& p) const {
    const auto x = point_coords(p);
    const int dims = static_cast<int>(spec.axes.size());
    std::array<std::ptrdiff_t, 4> base{};
    std::array<double, 4> frac{};
    std::vector<std::ptrdiff_t> strides(dims, 1);
    for (int ax = dims - 2; ax >= 0; --ax) strides[ax] = strides[ax + 1] * spec.axes[ax + 1].res;
    for (int ax = 0; ax < dims; ++ax) {
        const GridAxis& a = spec.axes[ax];
        const double h = spec.step(ax);
        double t = (std::clamp(x[ax], a.lo, a.hi) - a.lo) / h;
        std::ptrdiff_t b = static_cast<std::ptrdiff_t>(std::floor(t));
        b = std::clamp<std::ptrdiff_t>(b, 0, a.res - 2);
        base[ax] = b;
        frac[ax] = t - static_cast<double>(b);
    }
    double sum = 0.0;
    for (int c = 0; c < (1 << dims); ++c) {
        std::ptrdiff_t flat = 0;
        double wgt = 1.0;
        for (int ax = 0; ax < dims; ++ax) {
            const int bit = (c >> ax) & 1;
            flat += (base[ax] + bit) * strides[ax];
            wgt *= bit ? frac[ax] : 1.0 - frac[ax];
        }
        sum += wgt * values[flat];
    }
    return sum;
}

std::size_t EnvelopeGrid::nearest_node(const Point& p, double* node_dist) const {
    const auto x = point_coords(p);
    const int dims = static_cast<int>(spec.axes.size());
    std::size_t flat = 0;
    for (int ax = 0; ax < dims; ++ax) {
        const GridAxis& a = spec.axes[ax];
        const double h = spec.step(ax);
        long i = std::lround((x[ax] - a.lo) / h);
        i = std::clamp<long>(i, 0, a.res - 1);
        flat = flat * static_cast<std::size_t>(a.res) + static_cast<std::size_t>(i);
    }
    if (node_dist) *node_dist = dist(spec.node_point(flat), p);
    return flat;
}

std::string EnvelopeGrid::to_csv() const {
    std::string out = "# schema=1\nindex";
    const int dims = static_cast<int>(spec.axes.size());
    const char* names[4] = {"re_z1", "im_z1", "re_z2", "im_z2"};
    for (int ax = 0; ax < dims; ++ax) {
        out += ',';
        out += names[ax];
    }
    out += ",interior,value\n";
    char buf[192];
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Point p = spec.node_point(i);
        const auto x = point_coords(p);
        out += std::to_string(i);
        for (int ax = 0; ax < dims; ++ax) {
            std::snprintf(buf, sizeof buf, ",%.17g", x[ax]);
            out += buf;
        }
        std::snprintf(buf, sizeof buf, ",%d,%.17g\n", interior[i] ? 1 : 0, values[i]);
        out += buf;
    }
    return out;
}

std::string EnvelopeGrid::meta_json() const {
    nlohmann::json j;
    j["sweeps"] = sweeps;
    j["residual"] = residual;
    j["converged"] = converged;
    return j.dump(2);
}

EnvelopeGrid psh_envelope(const PiecewiseObjective& obj, const GridSpec& grid,
                          const RelaxConfig& cfg) {
    if (!grid.restriction)
        throw std::invalid_argument("psh_envelope: grid restriction must be X");
    const ExprFn& phi1 = obj.phi1();
    auto exterior = [phi1](const Point& p) {
        try {
            return eval_expr(phi1, p);
        } catch (const eval_error&) {
            return 0.0;
        }
    };
    auto obstacle = [&obj](const Point& p) { return obj.eval_phi(p); };
    PerronRelaxer relax(obj.X(), grid, cfg, obstacle, exterior);
    return relax.solve();
}

RefinedEnvelope psh_envelope_refined(const PiecewiseObjective& obj, const GridSpec& grid,
                                     const RelaxConfig& cfg) {
    GridSpec coarse = grid;
    for (GridAxis& ax : coarse.axes) {
        if (ax.res < 5 || ax.res % 2 == 0)
            throw std::invalid_argument("psh_envelope_refined: axis resolution must be 2m+1, m>=2");
        ax.res = (ax.res - 1) / 2 + 1;
    }
    return RefinedEnvelope{psh_envelope(obj, grid, cfg), psh_envelope(obj, coarse, cfg)};
}

EnvelopeGrid relative_extremal(const Domain& U, const Domain& X, const GridSpec& grid,
                               const RelaxConfig& cfg, bool closure_variant) {
    double band = 0.0;
    for (std::size_t ax = 0; ax < grid.axes.size(); ++ax)
        band = std::max(band, grid.step(static_cast<int>(ax)));
    // Nodes count as obstacle only when they sit a quarter-cell inside U
    // (open variant) or within a quarter-cell of cl(U) (closure variant); a
    // thin set that no cell resolves contributes nothing, matching its
    // negligible capacity at the grid scale.
    const double threshold = closure_variant ? -0.25 * band : 0.25 * band;
    auto obstacle = [U, threshold](const Point& p) {
        return U.signed_margin(p) > threshold ? -1.0 : 0.0;
    };
    auto exterior = [](const Point&) { return 0.0; };
    PerronRelaxer relax(X, grid, cfg, obstacle, exterior);
    return relax.solve();
}

double closure_extremal_compare(const Domain& U, const Domain& X, const GridSpec& grid,
                                const RelaxConfig& cfg) {
    const EnvelopeGrid open_variant = relative_extremal(U, X, grid, cfg, false);
    const EnvelopeGrid closed_variant = relative_extremal(U, X, grid, cfg, true);
    double diff = 0.0;
    for (std::size_t i = 0; i < open_variant.values.size(); ++i)
        if (open_variant.interior[i])
            diff = std::max(diff, std::abs(open_variant.values[i] - closed_variant.values[i]));
    return diff;
}

}  // namespace pluri
