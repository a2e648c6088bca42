#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dpot/measure.hpp"

using dpot::Atom;
using dpot::Endpoint;
using dpot::ImproperOptions;
using dpot::IntegralVerdict;
using dpot::Interval;
using dpot::kInf;
using dpot::RadonMeasure;

namespace {
constexpr double kTol = 1e-8;
const Interval kLine{-kInf, kInf};
const Interval kHalfLine{0.0, kInf};
}  // namespace

TEST_CASE("integrate: unit density identity") {
    auto mu = RadonMeasure::lebesgue(kLine);
    CHECK(mu.integrate([](double) { return 1.0; }, 0.0, 1.0) == Catch::Approx(1.0));
}

TEST_CASE("integrate: single atom against a kinked integrand") {
    // Atom at 1 with mass 1/delta, delta = 0.5; f = (2 - y)^+ over (0, 3].
    auto mu = RadonMeasure::point_mass(kLine, 1.0, 2.0);
    auto f = [](double y) { return std::max(2.0 - y, 0.0); };
    CHECK(mu.integrate(f, 0.0, 3.0) == Catch::Approx(2.0));
}

TEST_CASE("integrate: density 2/y^2 on (0,inf) over (1,2]") {
    auto mu = RadonMeasure(kHalfLine, [](double y) { return 2.0 / (y * y); });
    // Oracle: antiderivative of 2/y^2 is -2/y.
    double oracle = (-2.0 / 2.0) - (-2.0 / 1.0);
    CHECK(mu.integrate([](double) { return 1.0; }, 1.0, 2.0) ==
          Catch::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("integrate: rejects an empty range") {
    auto mu = RadonMeasure::lebesgue(kLine);
    CHECK_THROWS_AS(mu.integrate([](double) { return 1.0; }, 1.0, 1.0), dpot::InvalidInterval);
    CHECK_THROWS_AS(mu.integrate([](double) { return 1.0; }, 2.0, 1.0), dpot::InvalidInterval);
}

TEST_CASE("integrate: atom convention is half-open (a, b]") {
    auto mu = RadonMeasure::point_mass(kLine, 1.0, 3.0);
    auto one = [](double) { return 1.0; };
    CHECK(mu.integrate(one, 0.0, 1.0) == 3.0);  // atom exactly at b included
    CHECK(mu.integrate(one, 1.0, 2.0) == 0.0);  // atom exactly at a excluded
}

TEST_CASE("integrate: additivity and linearity on a mixed measure") {
    auto mu = RadonMeasure(
        kLine, [](double y) { return 1.0 / (1.0 + y * y); },
        {{-0.5, 0.25}, {1.25, 2.0}});
    auto f = [](double y) { return std::exp(-std::fabs(y)) + 0.1 * y * y; };
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int trial = 0; trial < 25; ++trial) {
        double pts[3] = {U(rng), U(rng), U(rng)};
        std::sort(pts, pts + 3);
        if (pts[1] - pts[0] < 1e-3 || pts[2] - pts[1] < 1e-3) continue;
        double whole = mu.integrate(f, pts[0], pts[2]);
        double split = mu.integrate(f, pts[0], pts[1]) + mu.integrate(f, pts[1], pts[2]);
        CHECK(whole == Catch::Approx(split).margin(kTol));
    }
    double base = mu.integrate(f, -2.0, 2.0);
    CHECK(mu.scaled(3.0).integrate(f, -2.0, 2.0) == Catch::Approx(3.0 * base).margin(kTol));
    auto f2 = [&](double y) { return 2.0 * f(y); };
    CHECK(mu.integrate(f2, -2.0, 2.0) == Catch::Approx(2.0 * base).margin(kTol));
}

TEST_CASE("improper: Lebesgue first moment diverges at -inf") {
    auto mu = RadonMeasure::lebesgue(kLine);
    auto v = mu.improper_integral([](double y) { return -y; }, Endpoint::Left, 0.0);
    CHECK(v.is_divergent());
    CHECK_FALSE(v.partial_sums.empty());
}

TEST_CASE("improper: logistic density has a finite first moment at -inf") {
    auto mu = RadonMeasure(kLine, [](double y) { return 1.0 / (1.0 + std::exp(-y)); });
    auto v = mu.improper_integral([](double y) { return -y; }, Endpoint::Left, 0.0);
    REQUIRE(v.is_finite());
    // Oracle: midpoint-rule evaluation of int_{-40}^{0} (-y) / (1 + e^{-y}) dy,
    // fine enough to pin three digits; the tail below -40 is < 2e-16.
    double oracle = 0.0;
    const int n = 400000;
    const double lo = -40.0, hi = 0.0, h = (hi - lo) / n;
    for (int i = 0; i < n; ++i) {
        double y = lo + (i + 0.5) * h;
        oracle += h * (-y) / (1.0 + std::exp(-y));
    }
    CHECK(v.value() == Catch::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("improper: 2/y^2 with linear weight log-diverges at 0") {
    auto mu = RadonMeasure(kHalfLine, [](double y) { return 2.0 / (y * y); });
    auto v = mu.improper_integral([](double y) { return y; }, Endpoint::Left, 1.0);
    CHECK(v.is_divergent());
}

TEST_CASE("improper: declared override short-circuits the heuristic") {
    auto mu = RadonMeasure::lebesgue(kLine);
    ImproperOptions opt;
    opt.declared = IntegralVerdict::Kind::Divergent;
    auto v = mu.improper_integral([](double) { return 0.0; }, Endpoint::Left, 0.0, opt);
    CHECK(v.is_divergent());
}

TEST_CASE("improper: enlarging the integrand never turns Divergent into Finite") {
    auto mu = RadonMeasure(kHalfLine, [](double y) { return 2.0 / (y * y); });
    auto f = [](double y) { return y; };
    auto g = [](double y) { return y + 0.5 * y * y; };  // f <= g near 0? g >= f for y > 0
    auto vf = mu.improper_integral(f, Endpoint::Left, 1.0);
    auto vg = mu.improper_integral(g, Endpoint::Left, 1.0);
    REQUIRE(vf.is_divergent());
    CHECK(vg.is_divergent());
}

TEST_CASE("improper: pure atoms settle to a finite value") {
    auto mu = RadonMeasure(kLine, nullptr, {{-2.0, 1.5}, {-5.0, 0.5}});
    auto v = mu.improper_integral([](double) { return 1.0; }, Endpoint::Left, 0.0);
    REQUIRE(v.is_finite());
    CHECK(v.value() == Catch::Approx(2.0));
}

TEST_CASE("measure: plus and reweighted combine parts") {
    auto a = RadonMeasure(kLine, [](double) { return 1.0; }, {{0.5, 1.0}});
    auto b = RadonMeasure(kLine, [](double y) { return y * y; }, {{-0.5, 2.0}});
    auto sum = a.plus(b);
    auto one = [](double) { return 1.0; };
    CHECK(sum.integrate(one, -1.0, 1.0) ==
          Catch::Approx(a.integrate(one, -1.0, 1.0) + b.integrate(one, -1.0, 1.0)));
    auto rw = a.reweighted([](double x) { return x + 1.0; });
    CHECK(rw.integrate(one, 0.0, 1.0) ==
          Catch::Approx(a.integrate([](double x) { return x + 1.0; }, 0.0, 1.0)));
}

TEST_CASE("measure: atoms outside the interval are rejected") {
    CHECK_THROWS_AS(RadonMeasure(kHalfLine, nullptr, {{-1.0, 1.0}}), dpot::InvalidInterval);
    CHECK_THROWS_AS(RadonMeasure(kHalfLine, nullptr, {{1.0, -2.0}}), dpot::NonFinite);
}

TEST_CASE("measure: full-line integral with decaying integrand") {
    auto mu = RadonMeasure::lebesgue(kLine);
    double v = mu.integrate([](double y) { return std::exp(-std::fabs(y)); }, -kInf, kInf);
    CHECK(v == Catch::Approx(2.0).epsilon(1e-7));
}
