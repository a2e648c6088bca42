#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dpot/expression.hpp"

using dpot::Expression;

TEST_CASE("expression: arithmetic and precedence") {
    CHECK(Expression::parse("1 + 2*3")(0.0) == 7.0);
    CHECK(Expression::parse("(1 + 2)*3")(0.0) == 9.0);
    CHECK(Expression::parse("2^3^2")(0.0) == 512.0);  // right-associative
    CHECK(Expression::parse("-x^2")(3.0) == -9.0);
    CHECK(Expression::parse("6/3/2")(0.0) == 1.0);
}

TEST_CASE("expression: variable aliases and functions") {
    auto f = Expression::parse("2/y^2");
    CHECK(f(2.0) == Catch::Approx(0.5));
    auto g = Expression::parse("1/(1 + exp(-x))");
    CHECK(g(0.0) == Catch::Approx(0.5));
    CHECK(Expression::parse("abs(min(x, -2))")(5.0) == 2.0);
    CHECK(Expression::parse("max(x, 0)")(-3.0) == 0.0);
    CHECK(Expression::parse("log(exp(x))")(1.25) == Catch::Approx(1.25));
    CHECK(Expression::parse("pi")(0.0) == Catch::Approx(3.14159265358979));
}

TEST_CASE("expression: parse errors carry position") {
    CHECK_THROWS_AS(Expression::parse("2 +"), dpot::ConfigError);
    CHECK_THROWS_AS(Expression::parse("foo(x)"), dpot::ConfigError);
    CHECK_THROWS_AS(Expression::parse("(1 + 2"), dpot::ConfigError);
    CHECK_THROWS_AS(Expression::parse("1 2"), dpot::ConfigError);
    CHECK_THROWS_AS(Expression::parse(""), dpot::ConfigError);
    CHECK_THROWS_AS(Expression::parse("min(x)"), dpot::ConfigError);
}

TEST_CASE("expression: source text round trip") {
    std::string src = "1/(1 + exp(-x))";
    CHECK(Expression::parse(src).source() == src);
}
