#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "spraylab/expr.hpp"
#include "test_support.hpp"

using namespace spraylab;

TEST_CASE("basic expressions") {
    CHECK(Expression::parse("1/r").eval(3, 4) == Catch::Approx(0.2));
    CHECK(Expression::parse("2 + 3*4").eval(0, 0) == Catch::Approx(14));
    CHECK(Expression::parse("(2 + 3)*4").eval(0, 0) == Catch::Approx(20));
    CHECK(Expression::parse("2^3^2").eval(0, 0) == Catch::Approx(512));  // right assoc
    CHECK(Expression::parse("-2^2").eval(0, 0) == Catch::Approx(-4));   // ^ binds tighter
    CHECK(Expression::parse("2^-1").eval(0, 0) == Catch::Approx(0.5));
    CHECK(Expression::parse("1 - 2 - 3").eval(0, 0) == Catch::Approx(-4));  // left assoc
    CHECK(Expression::parse("pi").eval(0, 0) == Catch::Approx(M_PI));
    CHECK(Expression::parse("sin(theta)").eval(0, 0, 1.2) == Catch::Approx(std::sin(1.2)));
    CHECK(Expression::parse("1e-3 + 2.5e2").eval(0, 0) == Catch::Approx(250.001));
}

TEST_CASE("parse errors carry positions") {
    try {
        Expression::parse("sqrt(-1");
        FAIL("expected a parse error");
    } catch (const ExprError& e) {
        CHECK(e.position == 8);
    }

    CHECK_THROWS_AS(Expression::parse("cot_K"), ExprError);
    CHECK_THROWS_AS(Expression::parse("foo(3)"), ExprError);
    CHECK_THROWS_AS(Expression::parse("1 +"), ExprError);
    CHECK_THROWS_AS(Expression::parse("(1"), ExprError);
    CHECK_THROWS_AS(Expression::parse(""), ExprError);
    CHECK_THROWS_AS(Expression::parse("1 2"), ExprError);
}

TEST_CASE("evaluator agrees with native references") {
    struct Case {
        const char* text;
        std::function<double(double, double, double)> ref;
    };
    auto R = [](double x, double y) { return std::hypot(x, y); };
    const std::vector<Case> panel = {
        {"x", [](double x, double, double) { return x; }},
        {"y", [](double, double y, double) { return y; }},
        {"r", [R](double x, double y, double) { return R(x, y); }},
        {"theta", [](double, double, double t) { return t; }},
        {"x*y - y^2", [](double x, double y, double) { return x * y - y * y; }},
        {"1/r", [R](double x, double y, double) { return 1.0 / R(x, y); }},
        {"(1 - r^2)/(1 + r^2)",
         [R](double x, double y, double) {
             const double r2 = R(x, y) * R(x, y);
             return (1 - r2) / (1 + r2);
         }},
        {"sin(x)*cos(y)",
         [](double x, double y, double) { return std::sin(x) * std::cos(y); }},
        {"exp(-x^2 - y^2)",
         [](double x, double y, double) { return std::exp(-x * x - y * y); }},
        {"log(1 + r)", [R](double x, double y, double) { return std::log(1 + R(x, y)); }},
        {"sqrt(abs(x))", [](double x, double, double) { return std::sqrt(std::fabs(x)); }},
        {"atan(y/x)", [](double x, double y, double) { return std::atan(y / x); }},
        {"tan(theta/3)", [](double, double, double t) { return std::tan(t / 3); }},
        {"3*x + 2", [](double x, double, double) { return 3 * x + 2; }},
        {"x^2 + y^2", [](double x, double y, double) { return x * x + y * y; }},
        {"-x", [](double x, double, double) { return -x; }},
        {"2*pi*r", [R](double x, double y, double) { return 2 * M_PI * R(x, y); }},
        {"x/y/2", [](double x, double y, double) { return x / y / 2; }},
        {"cos(theta)^2", [](double, double, double t) { return std::cos(t) * std::cos(t); }},
        {"1 - abs(2*x - 1)",
         [](double x, double, double) { return 1 - std::fabs(2 * x - 1); }},
    };

    testutil::Rng rng(11);
    for (const auto& c : panel) {
        const auto e = Expression::parse(c.text);
        for (int i = 0; i < 50; ++i) {
            const double x = rng.uniform(0.2, 2.0);
            const double y = rng.uniform(0.2, 2.0);
            const double t = rng.uniform(-3.0, 3.0);
            const double got = e.eval(x, y, t);
            const double want = c.ref(x, y, t);
            REQUIRE(got == Catch::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("evaluation is deterministic") {
    const auto e = Expression::parse("sin(x)*exp(y) - r^3");
    const double a = e.eval(0.7, -0.3, 0.1);
    for (int i = 0; i < 10; ++i) CHECK(e.eval(0.7, -0.3, 0.1) == a);
}
