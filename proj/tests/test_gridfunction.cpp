#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dpot/catalog.hpp"
#include "dpot/grid_function.hpp"

using namespace dpot;

namespace {
std::vector<double> uniform(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    return g;
}
}  // namespace

TEST_CASE("grid function: s-linear interpolation on a cubic scale") {
    Interval iv{-kInf, kInf};
    auto scale = ScaleFunction::from_functions(
        iv, [](double x) { return x * x * x; },
        [](double u) { return std::cbrt(u); }, [](double x) { return 3.0 * x * x; });
    // Values linear in s = x^3 between the nodes 1 and 2.
    GridFunction g(scale, {1.0, 2.0}, {0.0, 7.0});
    CHECK(g(1.5) == Catch::Approx(1.5 * 1.5 * 1.5 - 1.0));
}

TEST_CASE("s_derivative: kink of the positive part") {
    auto bm = catalog::brownian();
    auto g = GridFunction::sample(bm.scale, uniform(-2.0, 3.0, 11),
                                  [](double x) { return std::max(x - 1.0, 0.0); });
    CHECK(g.s_derivative(1.0, Side::Right) == Catch::Approx(1.0).margin(1e-9));
    CHECK(g.s_derivative(1.0, Side::Left) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("s_derivative: smooth exponential") {
    auto bm = catalog::brownian();
    const double r = std::sqrt(2.0);
    auto g = GridFunction::sample(bm.scale, uniform(-2.0, 2.0, 9),
                                  [r](double x) { return std::exp(r * x); });
    CHECK(g.s_derivative(0.0, Side::Right) == Catch::Approx(r).epsilon(1e-9));
    CHECK(g.s_derivative(0.0, Side::Left) == Catch::Approx(r).epsilon(1e-9));
}

TEST_CASE("s_derivative: sampled data uses cell quotients") {
    auto bm = catalog::brownian();
    GridFunction g(bm.scale, {0.0, 1.0, 2.0}, {0.0, 1.0, 3.0});
    CHECK(g.s_derivative(1.0, Side::Left) == Catch::Approx(1.0));
    CHECK(g.s_derivative(1.0, Side::Right) == Catch::Approx(2.0));
    CHECK(g.s_derivative(0.5, Side::Left) == Catch::Approx(1.0));
    CHECK(g.s_derivative(1.5, Side::Right) == Catch::Approx(2.0));
}

TEST_CASE("check_subharmonic: positive part passes") {
    auto bm = catalog::brownian();
    auto g = GridFunction::sample(bm.scale, uniform(-2.0, 2.0, 41),
                                  [](double x) { return std::max(x - 0.3, 0.0); });
    CHECK(check_subharmonic(g).ok);
}

TEST_CASE("check_subharmonic: negativity is reported") {
    auto bm = catalog::brownian();
    auto g = GridFunction::sample(bm.scale, uniform(0.1, 2.0, 20),
                                  [](double x) { return -x; });
    auto chk = check_subharmonic(g);
    REQUIRE_FALSE(chk.ok);
    CHECK(chk.first_violation->kind == SubharmonicViolation::Kind::Negative);
}

TEST_CASE("check_subharmonic: concavity is reported") {
    auto bm = catalog::brownian();
    auto g = GridFunction::sample(bm.scale, uniform(0.1, 3.0, 40),
                                  [](double x) { return std::sin(x); });
    auto chk = check_subharmonic(g);
    REQUIRE_FALSE(chk.ok);
    CHECK(chk.first_violation->kind == SubharmonicViolation::Kind::NonConvex);
}

TEST_CASE("grid function: construction guards") {
    auto bm = catalog::brownian();
    CHECK_THROWS_AS(GridFunction(bm.scale, {0.0, 0.0}, {1.0, 1.0}), InvalidInterval);
    CHECK_THROWS_AS(GridFunction(bm.scale, {0.0, 1.0}, {1.0}), InvalidInterval);
    CHECK_THROWS_AS(GridFunction(bm.scale, {0.0, 1.0}, {1.0, kInf}), NonFinite);
}

TEST_CASE("grid function: monotonicity probes and argmin") {
    auto bm = catalog::brownian();
    GridFunction up(bm.scale, {0.0, 1.0, 2.0}, {0.0, 1.0, 3.0});
    CHECK(up.nondecreasing());
    CHECK_FALSE(up.nonincreasing());
    GridFunction vee(bm.scale, {-1.0, 0.0, 1.0}, {1.0, 0.25, 1.0});
    CHECK_FALSE(vee.nondecreasing());
    CHECK(vee.argmin() == 1);
    GridFunction tie(bm.scale, {-1.0, 0.0, 1.0}, {0.25, 0.25, 1.0});
    CHECK(tie.argmin() == 0);  // leftmost minimiser
}
