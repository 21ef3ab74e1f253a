#include <doctest.h>

#include <cmath>

#include "pluri/geometry.hpp"

using namespace pluri;

TEST_CASE("ball margins") {
    const Domain b = Domain::ball(Point::c1(0.0), 1.0);
    CHECK(b.signed_margin(Point::c1(0.0)) == doctest::Approx(1.0));
    CHECK(b.signed_margin(Point::c1(0.5)) == doctest::Approx(0.5));
    CHECK(b.signed_margin(Point::c1(1.0)) == doctest::Approx(0.0));
    CHECK(b.signed_margin(Point::c1(1.5)) == doctest::Approx(-0.5));
    CHECK(b.contains(Point::c1(complexd(0.3, 0.4))));
    CHECK(!b.contains(Point::c1(complexd(0.8, 0.8))));
    CHECK(b.contains_closure(Point::c1(1.0)));
    CHECK(b.ball_radius() == 1.0);
}

TEST_CASE("annulus and polydisc margins") {
    const Domain a = Domain::annulus(Point::c1(0.0), 0.3, 0.8);
    CHECK(a.signed_margin(Point::c1(0.55)) == doctest::Approx(0.25));
    CHECK(a.signed_margin(Point::c1(0.35)) == doctest::Approx(0.05));
    CHECK(a.signed_margin(Point::c1(0.1)) == doctest::Approx(-0.2));
    CHECK(a.signed_margin(Point::c1(0.9)) == doctest::Approx(-0.1));

    const Domain p = Domain::polydisc(Point::c2(0.0, 0.0), 0.5, 0.25);
    CHECK(p.signed_margin(Point::c2(0.0, 0.0)) == doctest::Approx(0.25));
    CHECK(p.signed_margin(Point::c2(0.4, 0.0)) == doctest::Approx(0.1));
    CHECK(p.signed_margin(Point::c2(0.0, 0.3)) == doctest::Approx(-0.05));
}

TEST_CASE("slit disc and cusp") {
    const Domain s = Domain::slit_disc(0.0, 1.0, 0.0, 1.0);
    CHECK(s.signed_margin(Point::c1(0.5)) <= 0.0);  // on the slit
    CHECK(s.signed_margin(Point::c1(complexd(0.5, 0.1))) == doctest::Approx(0.1));
    CHECK(s.signed_margin(Point::c1(-0.5)) == doctest::Approx(0.5));

    const Domain c = Domain::cusp_region(0.5);
    CHECK(c.contains(Point::c1(complexd(0.3, 0.0))));
    CHECK(!c.contains(Point::c1(complexd(-0.1, 0.0))));
    CHECK(!c.contains(Point::c1(complexd(0.3, 0.1))));  // |y| >= exp(-1/0.3)
    CHECK(!c.contains(Point::c1(0.0)));
    // margin is a conservative lower bound on the distance to the complement
    const Point q = Point::c1(complexd(0.3, 0.0));
    CHECK(c.signed_margin(q) > 0.0);
    CHECK(c.signed_margin(q) <= std::exp(-1.0 / 0.3));
}

TEST_CASE("composite margins") {
    const Domain X = Domain::ball(Point::c1(0.0), 1.0);
    const Domain W = Domain::ball(Point::c1(0.0), 0.5);
    const Domain outer = Domain::difference(X, W);
    CHECK(outer.signed_margin(Point::c1(0.75)) == doctest::Approx(0.25));
    CHECK(outer.signed_margin(Point::c1(0.25)) == doctest::Approx(-0.25));

    const Domain inter = Domain::intersection(X, Domain::ball(Point::c1(0.5), 1.0));
    CHECK(inter.contains(Point::c1(0.25)));
    CHECK(!inter.contains(Point::c1(-0.75)));

    const Domain uni = Domain::set_union(Domain::ball(Point::c1(-0.5), 0.2),
                                         Domain::ball(Point::c1(0.4), 0.2));
    CHECK(uni.contains(Point::c1(-0.5)));
    CHECK(uni.contains(Point::c1(0.4)));
    CHECK(!uni.contains(Point::c1(0.0)));
    CHECK(uni.signed_margin(Point::c1(0.45)) == doctest::Approx(0.15));
}

TEST_CASE("boundary samples lie on the boundary") {
    const Domain shapes[] = {
        Domain::ball(Point::c1(0.2), 0.7),
        Domain::annulus(Point::c1(0.0), 0.3, 0.8),
        Domain::ball(Point::c2(0.0, 0.0), 0.7),
        Domain::slit_disc(0.0, 1.0, 0.0, 0.5),
    };
    for (const Domain& d : shapes) {
        const auto pts = d.boundary_sample(32);
        CHECK(pts.size() >= 32);
        for (const Point& p : pts) CHECK(std::abs(d.signed_margin(p)) <= 1e-9);
    }
    // deterministic
    const auto a = shapes[0].boundary_sample(16);
    const auto b = shapes[0].boundary_sample(16);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("composite boundary sample") {
    const Domain outer = Domain::difference(Domain::ball(Point::c1(0.0), 1.0),
                                            Domain::ball(Point::c1(0.0), 0.5));
    const auto pts = outer.boundary_sample(64);
    CHECK(pts.size() >= 64);
    bool saw_inner = false, saw_outer = false;
    for (const Point& p : pts) {
        CHECK(std::abs(outer.signed_margin(p)) <= 1e-9);
        if (std::abs(p.norm() - 0.5) < 1e-6) saw_inner = true;
        if (std::abs(p.norm() - 1.0) < 1e-6) saw_outer = true;
    }
    CHECK(saw_inner);
    CHECK(saw_outer);
}

TEST_CASE("grid enumeration is row-major with last axis fastest") {
    GridSpec spec;
    spec.axes = {{-1.0, 1.0, 3}, {-1.0, 1.0, 3}};
    spec.restriction = Domain::ball(Point::c1(0.0), 1.0);
    const auto nodes = make_grid(spec);
    REQUIRE(nodes.size() == 9);
    CHECK(nodes[0].p == Point::c1(complexd(-1.0, -1.0)));
    CHECK(nodes[1].p == Point::c1(complexd(-1.0, 0.0)));  // second axis moves first
    CHECK(nodes[3].p == Point::c1(complexd(0.0, -1.0)));
    int interior = 0;
    for (const auto& n : nodes) interior += n.interior ? 1 : 0;
    CHECK(interior == 1);  // only the center satisfies x^2 + y^2 < 1
    CHECK(nodes[4].interior);
}

TEST_CASE("grid validation") {
    GridSpec bad;
    bad.axes = {{-1.0, 1.0, 1}, {-1.0, 1.0, 3}};
    CHECK_THROWS(make_grid(bad));

    GridSpec empty;
    empty.axes = {{2.0, 3.0, 4}, {2.0, 3.0, 4}};
    empty.restriction = Domain::ball(Point::c1(0.0), 1.0);
    CHECK_THROWS(make_grid(empty));
}
