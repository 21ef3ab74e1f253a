#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pluri {

using complexd = std::complex<double>;

// Point of C^n, n in {1,2}.
struct Point {
    int n = 1;
    std::array<complexd, 2> z{};

    static Point c1(complexd z1) { return Point{1, {z1, {}}}; }
    static Point c2(complexd z1, complexd z2) { return Point{2, {z1, z2}}; }

    double norm2() const {
        double s = std::norm(z[0]);
        if (n == 2) s += std::norm(z[1]);
        return s;
    }
    double norm() const;
    bool operator==(const Point&) const = default;
};

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(complexd s, const Point& a);
double dist(const Point& a, const Point& b);

void require_same_dim(const Point& a, const Point& b);

// Open subsets of C^n from a fixed constructor catalog.  Margins are exact
// Euclidean (or min-coordinate) distances for the atomic kinds and
// conservative min/max combinations for composites.
class Domain {
public:
    enum class Kind {
        ball,
        annulus,
        polydisc,
        slit_disc,
        cusp_region,
        difference,
        intersection,
        set_union,
    };

    static Domain ball(Point center, double radius, std::string label = "");
    static Domain annulus(Point center, double r_in, double r_out, std::string label = "");
    static Domain polydisc(Point center, double r1, double r2, std::string label = "");
    // ball(center, radius) in C^1 minus the closed segment [slit_a, slit_b].
    static Domain slit_disc(complexd center, double radius, complexd slit_a, complexd slit_b,
                            std::string label = "");
    // { x+iy : 0 < x < x_max, |y| < exp(-1/x) }, thin at the origin.
    static Domain cusp_region(double x_max, std::string label = "");
    static Domain difference(Domain a, Domain b, std::string label = "");
    static Domain intersection(Domain a, Domain b, std::string label = "");
    static Domain set_union(Domain a, Domain b, std::string label = "");

    Kind kind() const;
    int dim() const;
    const std::string& label() const;
    int nesting_depth() const;

    bool contains(const Point& p) const { return signed_margin(p) > 0.0; }
    bool contains_closure(const Point& p) const { return signed_margin(p) >= 0.0; }
    double signed_margin(const Point& p) const;

    // k >= 8 points covering every boundary component; deterministic.
    std::vector<Point> boundary_sample(int k) const;

    // Ball accessors (nullopt for other kinds); used by search heuristics.
    std::optional<Point> ball_center() const;
    std::optional<double> ball_radius() const;

    struct Impl;
    const Impl& impl() const { return *impl_; }
    explicit Domain(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const Impl> impl_;
};

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int res = 0;
};

// Rectangular lattice over the 2n real coordinates.  Nodes outside the
// restriction domain are flagged exterior and carry no envelope values.
struct GridSpec {
    std::vector<GridAxis> axes;  // size 2n, n in {1,2}
    std::optional<Domain> restriction;

    int dim() const { return static_cast<int>(axes.size()) / 2; }
    std::size_t node_count() const;
    Point node_point(std::size_t flat_index) const;
    double step(int axis) const;
    bool operator==(const GridSpec& o) const;
};

struct GridNode {
    std::size_t index;
    Point p;
    bool interior;
};

// Row-major deterministic enumeration (last axis fastest).
std::vector<GridNode> make_grid(const GridSpec& spec);

}  // namespace pluri
