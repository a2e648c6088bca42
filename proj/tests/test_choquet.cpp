#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dpot/catalog.hpp"
#include "dpot/choquet.hpp"

using namespace dpot;

namespace {
std::vector<double> uniform(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    return g;
}

double sup_roundtrip_error(const GridFunction& g, const DiffusionSpec& spec) {
    auto d = choquet_decompose(g, spec);
    double sup = 0.0;
    for (std::size_t i = 0; i < g.grid().size(); ++i) {
        double err = std::fabs(choquet_reconstruct(d, spec, g.grid()[i]) - g.values()[i]);
        sup = std::max(sup, err);
    }
    return sup;
}
}  // namespace

TEST_CASE("decompose: extremal positive part gives a unit atom") {
    auto bm = catalog::brownian();
    auto g = GridFunction::sample(bm.scale, uniform(-2.0, 2.0, 81),
                                  [](double x) { return std::max(x - 0.3, 0.0); });
    auto d = choquet_decompose(g, bm);
    CHECK(d.alpha == Catch::Approx(0.0).margin(1e-10));
    CHECK(d.kappa1 == 0.0);
    CHECK(d.kappa2 == 0.0);
    CHECK(d.mu2.empty());
    REQUIRE(d.mu1.atoms.size() == 1);
    CHECK(d.mu1.atoms[0].location == Catch::Approx(0.3).margin(1e-9));
    CHECK(d.mu1.atoms[0].mass == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(d.mu1.cells.empty());
}

TEST_CASE("decompose: affine in scale carries slopes in kappa") {
    Interval iv{0.0, 1.0};
    DiffusionSpec spec{iv, ScaleFunction::natural(iv), RadonMeasure::lebesgue(iv, 2.0), "bm01"};
    auto g = GridFunction::sample(spec.scale, uniform(0.05, 0.95, 19),
                                  [](double x) { return 3.0 + 2.0 * x; });
    auto d = choquet_decompose(g, spec);
    CHECK(d.alpha == Catch::Approx(3.0).margin(1e-10));
    CHECK(d.kappa1 == Catch::Approx(2.0).epsilon(1e-9));
    CHECK(d.kappa2 == 0.0);
    CHECK(d.mu1.total() == Catch::Approx(0.0).margin(1e-8));
    CHECK(d.mu2.empty());
}

TEST_CASE("decompose: exponential has density 2 exp(sqrt(2) y)") {
    auto bm = catalog::brownian();
    const double r = std::sqrt(2.0);
    auto g = GridFunction::sample(bm.scale, uniform(-3.0, 3.0, 601),
                                  [r](double x) { return std::exp(r * x); });
    auto d = choquet_decompose(g, bm);
    CHECK(d.alpha == Catch::Approx(0.0).margin(1e-8));
    CHECK(d.kappa1 == 0.0);
    CHECK(d.mu2.empty());
    // Cumulative mass of mu1 between -1 and 1 against the analytic density.
    double got = d.mu1.cumulative(1.0) - d.mu1.cumulative(-1.0);
    double want = r * (std::exp(r) - std::exp(-r));  // int 2 e^{r y} dy
    CHECK(got == Catch::Approx(want).epsilon(1e-7));
}

TEST_CASE("decompose: non-monotone minimum pins alpha and splits the measures") {
    auto bm = catalog::brownian();
    auto g = GridFunction::sample(bm.scale, uniform(-2.5, 2.5, 201),
                                  [](double x) { return std::cosh(x); });
    auto d = choquet_decompose(g, bm);
    CHECK(d.alpha == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(d.cstar == Catch::Approx(0.0).margin(1e-9));
    CHECK(d.kappa1 == 0.0);
    CHECK(d.kappa2 == 0.0);
    for (const auto& a : d.mu1.atoms) CHECK(a.location >= d.cstar - 1e-9);
    for (const auto& c : d.mu1.cells) CHECK(c.y_lo >= d.cstar - 1e-9);
    for (const auto& a : d.mu2.atoms) CHECK(a.location <= d.cstar + 1e-9);
    for (const auto& c : d.mu2.cells) CHECK(c.y_hi <= d.cstar + 1e-9);
}

TEST_CASE("decompose/reconstruct: round trip catalog") {
    auto bm = catalog::brownian();
    auto bmp = catalog::brownian_positive();
    const double r = std::sqrt(2.0);

    // Piecewise linear, 1 and 3 kinks; exponential; cosh; x^2; decreasing PL.
    auto pl1 = [](double x) { return std::max(x - 0.3, 0.0); };
    auto pl3 = [](double x) {
        return 0.2 + 0.5 * std::max(x + 1.0, 0.0) + std::max(x, 0.0) +
               0.3 * std::max(x - 1.2, 0.0);
    };
    auto expg = [r](double x) { return std::exp(r * x); };
    auto coshg = [](double x) { return std::cosh(x); };
    auto sq = [](double x) { return x * x; };
    auto dec = [](double x) { return 0.5 + std::max(1.0 - x, 0.0); };

    CHECK(sup_roundtrip_error(GridFunction::sample(bm.scale, uniform(-2, 2, 201), pl1), bm) <
          1e-9);
    CHECK(sup_roundtrip_error(GridFunction::sample(bm.scale, uniform(-3, 3, 301), pl3), bm) <
          1e-9);
    CHECK(sup_roundtrip_error(GridFunction::sample(bm.scale, uniform(-3, 3, 601), expg), bm) <
          1e-8);
    CHECK(sup_roundtrip_error(GridFunction::sample(bm.scale, uniform(-2.5, 2.5, 501), coshg),
                              bm) < 1e-8);
    CHECK(sup_roundtrip_error(GridFunction::sample(bmp.scale, uniform(0.1, 10.0, 601), sq),
                              bmp) < 1e-8);
    CHECK(sup_roundtrip_error(GridFunction::sample(bm.scale, uniform(-4, 4, 401), dec), bm) <
          1e-9);
}

TEST_CASE("decompose: sampled data without closed form still detects kinks") {
    auto bm = catalog::brownian();
    auto grid = uniform(-2.0, 2.0, 81);  // contains 0.3? ensure node at 0.3
    grid.push_back(0.3);
    std::sort(grid.begin(), grid.end());
    std::vector<double> vals;
    for (double x : grid) vals.push_back(std::max(x - 0.3, 0.0));
    GridFunction g(bm.scale, grid, vals);  // no closed form
    auto d = choquet_decompose(g, bm);
    REQUIRE(d.mu1.atoms.size() == 1);
    CHECK(d.mu1.atoms[0].location == Catch::Approx(0.3));
    CHECK(d.mu1.atoms[0].mass == Catch::Approx(1.0));
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        sup = std::max(sup,
                       std::fabs(choquet_reconstruct(d, bm, grid[i]) - vals[i]));
    CHECK(sup < 1e-12);
}

TEST_CASE("decompose: uniqueness surrogate via re-decomposition") {
    auto bm = catalog::brownian();
    auto g = GridFunction::sample(bm.scale, uniform(-2.5, 2.5, 201),
                                  [](double x) { return std::cosh(x); });
    auto d1 = choquet_decompose(g, bm);
    auto recon = [&](double x) { return choquet_reconstruct(d1, bm, x); };
    auto g2 = GridFunction::sample(bm.scale, g.grid(), recon);
    auto d2 = choquet_decompose(g2, bm);
    CHECK(d2.alpha == Catch::Approx(d1.alpha).margin(1e-9));
    CHECK(d2.kappa1 == Catch::Approx(d1.kappa1).margin(1e-9));
    CHECK(d2.kappa2 == Catch::Approx(d1.kappa2).margin(1e-9));
    for (double x : {-2.0, -1.0, -0.3, 0.4, 1.1, 2.2}) {
        double sx = bm.scale(x);
        CHECK(d2.mu1.cumulative(sx) == Catch::Approx(d1.mu1.cumulative(sx)).margin(1e-7));
        CHECK(d2.mu2.cumulative(sx) == Catch::Approx(d1.mu2.cumulative(sx)).margin(1e-7));
    }
}

TEST_CASE("compensator_measure: atom, zero and density cases") {
    auto bm = catalog::brownian();
    auto one = [](double) { return 1.0; };

    auto pl = GridFunction::sample(bm.scale, uniform(-2.0, 2.0, 81),
                                   [](double x) { return std::max(x - 0.3, 0.0); });
    auto m1 = compensator_measure(choquet_decompose(pl, bm), bm);
    CHECK(m1.integrate(one, 0.2, 0.4) == Catch::Approx(1.0).margin(1e-9));

    Interval iv{0.0, 1.0};
    DiffusionSpec spec01{iv, ScaleFunction::natural(iv), RadonMeasure::lebesgue(iv, 2.0), "b"};
    auto aff = GridFunction::sample(spec01.scale, uniform(0.05, 0.95, 19),
                                    [](double x) { return 3.0 + 2.0 * x; });
    auto m2 = compensator_measure(choquet_decompose(aff, spec01), spec01);
    CHECK(m2.integrate(one, 0.1, 0.9) == Catch::Approx(0.0).margin(1e-8));

    const double r = std::sqrt(2.0);
    auto ex = GridFunction::sample(bm.scale, uniform(-3.0, 3.0, 601),
                                   [r](double x) { return std::exp(r * x); });
    auto m3 = compensator_measure(choquet_decompose(ex, bm), bm);
    double want = r * (std::exp(r) - 1.0);  // int_0^1 2 e^{r y} dy
    CHECK(m3.integrate(one, 0.0, 1.0) == Catch::Approx(want).epsilon(1e-6));
}

TEST_CASE("decompose: rejects non-subharmonic input") {
    auto bm = catalog::brownian();
    auto g = GridFunction::sample(bm.scale, uniform(0.2, 2.8, 41),
                                  [](double x) { return std::sin(x); });
    CHECK_THROWS_AS(choquet_decompose(g, bm), NotSubharmonic);
}
