#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dpot/diffusion.hpp"
#include "dpot/measure.hpp"
#include "dpot/scale.hpp"

namespace dpot::catalog {

/// Standard Brownian motion on the line: s(x) = x, m(dx) = 2 dx.
inline DiffusionSpec brownian() { return DiffusionSpec::brownian(); }

/// Brownian motion on (0, inf) absorbed at 0.
inline DiffusionSpec brownian_positive() { return DiffusionSpec::brownian_positive(); }

/// Scale function of the measure-changed diffusion obtained from Brownian
/// motion and the pair g = delta + (x-1)^+, A = (2 delta)^{-1} L^1:
///
///     s_delta(x) = 1/delta - 1/(delta + x - 1)   for x >= 1,
///                  (x - 1)/delta^2               for x <  1.
inline ScaleFunction delta_scale(double delta) {
    Interval iv{-kInf, kInf};
    auto fwd = [delta](double x) {
        return x >= 1.0 ? 1.0 / delta - 1.0 / (delta + x - 1.0)
                        : (x - 1.0) / (delta * delta);
    };
    auto inv = [delta](double u) {
        return u >= 0.0 ? 1.0 - delta + 1.0 / (1.0 / delta - u) : 1.0 + delta * delta * u;
    };
    auto deriv = [delta](double x) {
        double g = delta + std::max(x - 1.0, 0.0);
        return 1.0 / (g * g);
    };
    return ScaleFunction::from_functions(iv, fwd, inv, deriv, -kInf, 1.0 / delta);
}

/// The transformed diffusion itself: scale s_delta, speed 2 g^2 dx.
inline DiffusionSpec delta_diffusion(double delta) {
    Interval iv{-kInf, kInf};
    auto speed = RadonMeasure(
        iv,
        [delta](double x) {
            double g = delta + std::max(x - 1.0, 0.0);
            return 2.0 * g * g;
        },
        {}, "2 g^2 dx");
    return DiffusionSpec{iv, delta_scale(delta), speed, "delta-example"};
}

/// Revuz measure of (2 delta)^{-1} L^1 for Brownian motion: one atom at 1
/// with mass 1/delta.
inline RadonMeasure delta_measure(double delta) {
    return RadonMeasure::point_mass(Interval{-kInf, kInf}, 1.0, 1.0 / delta);
}

/// mu(dy) = 2/y^2 dy on (0, inf); makes 0 an A-natural boundary.
inline RadonMeasure inverse_square_measure() {
    return RadonMeasure(
        Interval{0.0, kInf}, [](double y) { return 2.0 / (y * y); }, {}, "2/y^2 dy");
}

/// mu(dx) = (1 + e^{-x})^{-1} dx on the line; -inf is A-entrance.
inline RadonMeasure exp_entrance_measure() {
    return RadonMeasure(
        Interval{-kInf, kInf}, [](double x) { return 1.0 / (1.0 + std::exp(-x)); }, {},
        "1/(1 + exp(-x)) dx");
}

/// mu(dy) = 2 dy on the line; both ends A-natural, solutions exp(+-sqrt(2) x).
inline RadonMeasure two_lebesgue_measure() {
    return RadonMeasure::lebesgue(Interval{-kInf, kInf}, 2.0);
}

struct Entry {
    std::string name;
    std::string summary;
};

inline std::vector<Entry> entries() {
    return {
        {"delta-example",
         "atom at 1 with mass 1/delta on Brownian motion; closed-form pair "
         "delta + (x-1)^+, delta + (1-x)^+"},
        {"inv-square", "2/y^2 dy on Brownian motion over (0, inf); 0 is A-natural, psi = x^2"},
        {"exp-entrance",
         "(1 + exp(-x))^{-1} dx on Brownian motion; -inf is A-entrance, psi = 1 + exp(x)"},
        {"lebesgue2", "2 dy on Brownian motion; both ends A-natural, psi = exp(sqrt(2) x)"},
    };
}

}  // namespace dpot::catalog
