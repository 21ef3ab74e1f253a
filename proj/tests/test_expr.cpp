#include <doctest.h>

#include <cmath>
#include <limits>

#include "pluri/expr.hpp"

using namespace pluri;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
double ev1(const std::string& text, complexd z) {
    return eval_expr(parse_expr(text), Point::c1(z));
}
}  // namespace

TEST_CASE("constants and precedence") {
    CHECK(ev1("2", 0.0) == 2.0);
    CHECK(ev1("-1", 0.0) == -1.0);
    CHECK(ev1("1+2*3", 0.0) == 7.0);
    CHECK(ev1("(1+2)*3", 0.0) == 9.0);
    CHECK(ev1("2^3", 0.0) == 8.0);
    CHECK(ev1("-2^2", 0.0) == 4.0);  // unary minus binds inside the base
    CHECK(ev1("10-4-3", 0.0) == 3.0);
    CHECK(ev1("16/4/2", 0.0) == 2.0);
}

TEST_CASE("variables") {
    const complexd z(3.0, -4.0);
    CHECK(ev1("re(z1)", z) == 3.0);
    CHECK(ev1("im(z1)", z) == -4.0);
    CHECK(ev1("abs(z1)", z) == doctest::Approx(5.0));
    CHECK(ev1("abs2(z1)", z) == doctest::Approx(25.0));
    const ExprFn two_var = parse_expr("abs2(z1)+abs2(z2)");
    CHECK(two_var.max_var_index() == 2);
    CHECK(eval_expr(two_var, Point::c2(complexd(1, 0), complexd(0, 2))) == doctest::Approx(5.0));
    CHECK(parse_expr("1+2").max_var_index() == 0);
}

TEST_CASE("functions") {
    CHECK(ev1("max(1,2)", 0.0) == 2.0);
    CHECK(ev1("min(1,2)", 0.0) == 1.0);
    CHECK(ev1("log(exp(1))", 0.0) == doctest::Approx(1.0));
    CHECK(ev1("exp(0)", 0.0) == 1.0);
}

TEST_CASE("extended reals") {
    CHECK(ev1("log(0)", 0.0) == -kInf);
    CHECK(ev1("-inf", 0.0) == -kInf);
    CHECK(ev1("-inf+5", 0.0) == -kInf);
    CHECK(ev1("min(-inf,3)", 0.0) == -kInf);
    CHECK(ev1("max(-inf,3)", 0.0) == 3.0);
    CHECK(ev1("exp(-inf)", 0.0) == 0.0);
    CHECK_THROWS_AS(ev1("inf", 0.0), eval_error);         // +inf is not a value
    CHECK_THROWS_AS(ev1("log(-1)", 0.0), eval_error);
    CHECK_THROWS_AS(ev1("1/0", 0.0), eval_error);
    CHECK_THROWS_AS(ev1("-inf*0", 0.0), eval_error);      // indeterminate
    CHECK_THROWS_AS(ev1("-inf-(-inf)", 0.0), eval_error); // indeterminate
}

TEST_CASE("parse errors carry a column") {
    CHECK_THROWS_AS(parse_expr("1+"), parse_error);
    CHECK_THROWS_AS(parse_expr("foo(z1)"), parse_error);
    CHECK_THROWS_AS(parse_expr("re(z3)"), parse_error);
    CHECK_THROWS_AS(parse_expr("(1+2"), parse_error);
    CHECK_THROWS_AS(parse_expr("2^x"), parse_error);  // exponent must be an integer literal
    try {
        parse_expr("1+*2");
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(e.column() >= 2);
    }
}

TEST_CASE("print round trip") {
    for (const char* text : {"max(-1,log(2*abs(z1))/log(2)*3-1)", "re(z1)^2+im(z1)^2",
                             "min(exp(re(z1)),2)", "-1", "abs2(z1)+abs2(z2)"}) {
        const ExprFn e = parse_expr(text);
        const ExprFn round = parse_expr(print_expr(e));
        const Point p = Point::c2(complexd(0.37, -0.21), complexd(0.11, 0.05));
        CHECK(eval_expr(e, p) == eval_expr(round, p));
    }
}
