#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "dpot/errors.hpp"
#include "dpot/measure.hpp"
#include "dpot/scale.hpp"

namespace dpot {

/*
 * Regular diffusion on an open interval, characterised by its scale
 * function and speed measure.  Boundaries are absorbing and there is no
 * killing inside the interval.  The Brownian-motion convention used by
 * the built-in catalog is s(x) = x, m(dx) = 2 dx, which normalises the
 * local time so that E^x[L^y_{T_ab}] equals the Green kernel u_ab(x, y).
 */
struct DiffusionSpec {
    Interval interval;
    ScaleFunction scale;
    RadonMeasure speed;
    std::string name;

    void validate() const {
        if (!interval.valid()) throw InvalidInterval("diffusion interval is empty");
        if (speed.interval().left != interval.left || speed.interval().right != interval.right)
            throw InvalidInterval("speed measure lives on a different interval");
        // Regularity surrogate: the speed measure charges every open
        // subinterval we can cheaply probe.
        double lo = std::isinf(interval.left) ? -8.0 : interval.left;
        double hi = std::isinf(interval.right) ? 8.0 : interval.right;
        for (int i = 0; i < 8; ++i) {
            double a = lo + (hi - lo) * i / 8.0;
            double b = lo + (hi - lo) * (i + 1) / 8.0;
            if (speed.mass(a, b) <= 0.0)
                throw ZeroMeasure("speed measure does not charge (" + std::to_string(a) + ", " +
                                  std::to_string(b) + ")");
        }
    }

    static DiffusionSpec brownian() {
        Interval iv{-kInf, kInf};
        return DiffusionSpec{iv, ScaleFunction::natural(iv), RadonMeasure::lebesgue(iv, 2.0),
                             "bm"};
    }
    static DiffusionSpec brownian_positive() {
        Interval iv{0.0, kInf};
        return DiffusionSpec{iv, ScaleFunction::natural(iv), RadonMeasure::lebesgue(iv, 2.0),
                             "bm+"};
    }
};

/// P^x(T_b < T_a) for a < x < b with finite s(a), s(b).
inline double hitting_prob(const DiffusionSpec& spec, double x, double a, double b) {
    if (!(a < x && x < b)) throw InvalidInterval("hitting_prob: need a < x < b");
    double sa = a == spec.interval.left ? spec.scale.limit_left() : spec.scale(a);
    double sb = b == spec.interval.right ? spec.scale.limit_right() : spec.scale(b);
    if (std::isinf(sa) || std::isinf(sb))
        throw NonFinite("hitting_prob: scale is infinite at an endpoint of (a, b)");
    return (spec.scale(x) - sa) / (sb - sa);
}

/// Green kernel u_ab(x, y) = (s(x^y) - s(a))(s(b) - s(xvy)) / (s(b) - s(a)),
/// the expected local time at y before exiting (a, b) when started at x.
inline double green_kernel(const DiffusionSpec& spec, double a, double b, double x, double y) {
    if (!(a < x && x < b && a < y && y < b))
        throw InvalidInterval("green_kernel: x, y must lie in (a, b)");
    double sa = a == spec.interval.left ? spec.scale.limit_left() : spec.scale(a);
    double sb = b == spec.interval.right ? spec.scale.limit_right() : spec.scale(b);
    if (std::isinf(sa) || std::isinf(sb)) throw NonFinite("green_kernel: infinite scale");
    double slo = spec.scale(std::min(x, y));
    double shi = spec.scale(std::max(x, y));
    return (slo - sa) * (sb - shi) / (sb - sa);
}

struct TransienceReport {
    bool transient = false;
    // P^x(X_{zeta-} = r) and P^x(X_{zeta-} = l); meaningful when transient.
    double attraction_right = 0.0;
    double attraction_left = 0.0;
};

/// Transient iff at least one scale limit is finite.  With both limits
/// finite the exit side follows the scale formula; with exactly one
/// finite limit the process is pulled to that side almost surely.
inline TransienceReport is_transient(const DiffusionSpec& spec, double x) {
    double sl = spec.scale.limit_left();
    double sr = spec.scale.limit_right();
    TransienceReport rep;
    if (std::isinf(sl) && std::isinf(sr)) return rep;
    rep.transient = true;
    if (!std::isinf(sl) && !std::isinf(sr)) {
        rep.attraction_right = (spec.scale(x) - sl) / (sr - sl);
        rep.attraction_left = 1.0 - rep.attraction_right;
    } else if (std::isinf(sl)) {
        rep.attraction_right = 1.0;
    } else {
        rep.attraction_left = 1.0;
    }
    return rep;
}

/// Potential density u(x, y) of a transient diffusion, the monotone limit
/// of green_kernel as (a, b) fills the state interval.
inline double potential_density(const DiffusionSpec& spec, double x, double y) {
    double sl = spec.scale.limit_left();
    double sr = spec.scale.limit_right();
    if (std::isinf(sl) && std::isinf(sr))
        throw NotTransient("potential_density: both scale limits are infinite");
    double slo = spec.scale(std::min(x, y));
    double shi = spec.scale(std::max(x, y));
    if (std::isinf(sl)) return sr - shi;
    if (std::isinf(sr)) return slo - sl;
    return (slo - sl) * (sr - shi) / (sr - sl);
}

/// E^x[ \int_0^zeta f(X_t) dA_t ] = \int u(x, y) f(y) mu_A(dy).
inline double pcaf_potential(const DiffusionSpec& spec, const RadonMeasure& mu_A,
                             const std::function<double(double)>& f, double x) {
    TransienceReport rep = is_transient(spec, x);
    if (!rep.transient) throw NotTransient("pcaf_potential: diffusion is recurrent");
    auto integrand = [&](double y) { return potential_density(spec, x, y) * f(y); };
    // u(x, .) has a kink at x; keep quadrature panels off it.
    return mu_A.integrate(integrand, spec.interval.left, spec.interval.right, {x});
}

inline double reference_point(const Interval& iv) {
    if (!std::isinf(iv.left) && !std::isinf(iv.right)) return 0.5 * (iv.left + iv.right);
    if (std::isinf(iv.left) && std::isinf(iv.right)) return 0.0;
    return std::isinf(iv.left) ? iv.right - 1.0 : iv.left + 1.0;
}

enum class PcafBoundaryVerdict { AlwaysInfinite, FiniteAtBoundary, Unreachable, Inconclusive };

struct PcafFinitenessReport {
    PcafBoundaryVerdict at_left = PcafBoundaryVerdict::Unreachable;
    PcafBoundaryVerdict at_right = PcafBoundaryVerdict::Unreachable;
    IntegralVerdict detail_left;
    IntegralVerdict detail_right;
};

/*
 * Finiteness of the PCAF lifetime value A_zeta, endpoint by endpoint.
 * Recurrent diffusions give an infinite A_zeta outright.  At an endpoint
 * with finite scale limit, A_zeta is finite on the attraction event iff
 * the first scale moment of mu_A converges there; an endpoint with
 * infinite scale limit is never the exit side of a transient diffusion.
 */
inline PcafFinitenessReport pcaf_finiteness(const DiffusionSpec& spec, const RadonMeasure& mu_A,
                                            const ImproperOptions& opt = {}) {
    if (!mu_A.has_mass()) throw ZeroMeasure("pcaf_finiteness: measure carries no mass");
    PcafFinitenessReport rep;
    double sl = spec.scale.limit_left();
    double sr = spec.scale.limit_right();
    if (std::isinf(sl) && std::isinf(sr)) {
        rep.at_left = rep.at_right = PcafBoundaryVerdict::AlwaysInfinite;
        return rep;
    }
    double mid = reference_point(spec.interval);
    if (!std::isinf(sl)) {
        auto f = [&](double z) { return spec.scale(z) - sl; };
        ImproperOptions o = opt;
        o.declared = mu_A.hint_left.scale_weighted;
        rep.detail_left = mu_A.improper_integral(f, Endpoint::Left, mid, o);
        rep.at_left = rep.detail_left.is_finite()      ? PcafBoundaryVerdict::FiniteAtBoundary
                      : rep.detail_left.is_divergent() ? PcafBoundaryVerdict::AlwaysInfinite
                                                       : PcafBoundaryVerdict::Inconclusive;
    }
    if (!std::isinf(sr)) {
        auto f = [&](double z) { return sr - spec.scale(z); };
        ImproperOptions o = opt;
        o.declared = mu_A.hint_right.scale_weighted;
        rep.detail_right = mu_A.improper_integral(f, Endpoint::Right, mid, o);
        rep.at_right = rep.detail_right.is_finite()      ? PcafBoundaryVerdict::FiniteAtBoundary
                       : rep.detail_right.is_divergent() ? PcafBoundaryVerdict::AlwaysInfinite
                                                         : PcafBoundaryVerdict::Inconclusive;
    }
    return rep;
}

}  // namespace dpot
