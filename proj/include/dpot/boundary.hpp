#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "dpot/diffusion.hpp"
#include "dpot/errors.hpp"
#include "dpot/measure.hpp"

namespace dpot {

/// Boundary type of an endpoint relative to an additive functional.
enum class BoundaryKind { ARegular, AEntrance, AExit, ANatural };

inline std::string to_string(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::ARegular: return "A-regular";
        case BoundaryKind::AEntrance: return "A-entrance";
        case BoundaryKind::AExit: return "A-exit";
        default: return "A-natural";
    }
}

struct BoundaryClass {
    Endpoint endpoint = Endpoint::Left;
    std::optional<BoundaryKind> kind;  // empty when a diagnostic was inconclusive
    IntegralVerdict scale_weighted;    // tail of mu((z,b)) against s(dz)
    IntegralVerdict first_moment;      // tail of |s(b)-s(z)| against mu(dz)
    double b_used = 0.0;

    bool conclusive() const { return kind.has_value(); }
    BoundaryKind require() const {
        if (!kind)
            throw InconclusiveVerdict(
                "boundary classification inconclusive; supply an analytic hint on the measure");
        return *kind;
    }
};

struct ClassifyOptions {
    // Sharper-than-default cutoff schedule: each step moves 32x closer to
    // the endpoint, which separates power-law tails up to exponent ~1.9.
    ImproperOptions improper{.step_ratio = 1.0 / 32.0, .max_steps = 48};
    std::optional<IntegralVerdict::Kind> override_scale_weighted;
    std::optional<IntegralVerdict::Kind> override_first_moment;
};

namespace detail {

/// First point strictly on the endpoint side of which mu carries mass, or
/// nullopt when nothing is detectable there.
inline std::optional<double> innermost_mass_point(const RadonMeasure& mu, Endpoint end) {
    const Interval& iv = mu.interval();
    std::optional<double> best;
    auto better = [&](double p) {
        if (!best || (end == Endpoint::Left ? p < *best : p > *best)) best = p;
    };
    for (const Atom& a : mu.atoms()) better(a.location);
    if (mu.has_density()) {
        double lo = std::isinf(iv.left) ? -64.0 : iv.left;
        double hi = std::isinf(iv.right) ? 64.0 : iv.right;
        double mid = 0.5 * (lo + hi);
        for (int i = 1; i < 64; ++i) {
            double p = lo + (hi - lo) * i / 64.0;
            if (mu.density_at(p) > 0.0) better(p);
        }
        for (int k = 1; k <= 40; ++k) {
            double pl = lo + (mid - lo) * std::pow(0.5, k);
            double pr = hi - (hi - mid) * std::pow(0.5, k);
            if (mu.density_at(pl) > 0.0) better(pl);
            if (mu.density_at(pr) > 0.0) better(pr);
        }
        for (int k = 7; k <= 40; ++k) {
            if (std::isinf(iv.left) && mu.density_at(-std::pow(2.0, k)) > 0.0)
                better(-std::pow(2.0, k));
            if (std::isinf(iv.right) && mu.density_at(std::pow(2.0, k)) > 0.0)
                better(std::pow(2.0, k));
        }
    }
    return best;
}

/// Classification needs mass strictly between the endpoint and b, and b
/// itself clear of atoms (the diagnostic integrals use the open interval).
inline double adjust_reference_point(const RadonMeasure& mu, Endpoint end, double b) {
    const Interval& iv = mu.interval();
    bool mass_inside = false;
    for (const Atom& a : mu.atoms())
        if (end == Endpoint::Left ? a.location < b : a.location > b) mass_inside = true;
    if (!mass_inside && mu.has_density()) {
        double edge = end == Endpoint::Left ? (std::isinf(iv.left) ? b - 64.0 : iv.left) : b;
        double far = end == Endpoint::Left ? b : (std::isinf(iv.right) ? b + 64.0 : iv.right);
        for (int i = 1; i < 64 && !mass_inside; ++i)
            if (mu.density_at(edge + (far - edge) * i / 64.0) > 0.0) mass_inside = true;
    }
    if (!mass_inside) {
        auto inner = innermost_mass_point(mu, end);
        if (!inner) throw ZeroMeasure("classify: measure carries no detectable mass");
        double target = *inner;
        if (end == Endpoint::Left) {
            double room = std::isinf(iv.right) ? 1.0 : 0.5 * (iv.right - target);
            b = target + std::min(1.0, room);
        } else {
            double room = std::isinf(iv.left) ? 1.0 : 0.5 * (target - iv.left);
            b = target - std::min(1.0, room);
        }
    }
    for (const Atom& a : mu.atoms()) {
        if (std::fabs(a.location - b) <= 1e-12 * (1.0 + std::fabs(b))) {
            double eps = 1e-9 * (1.0 + std::fabs(b));
            b = end == Endpoint::Left ? b - eps : b + eps;
        }
    }
    if (!iv.contains(b)) throw InvalidInterval("classify: reference point left the interval");
    return b;
}

}  // namespace detail

/*
 * Classify an endpoint relative to mu_A through the two diagnostic
 * integrals (here stated for the left endpoint; the right one mirrors):
 *
 *     (x)  int_l^b mu_A((z, b)) s(dz)
 *     (e)  int_l^b (s(b) - s(z)) mu_A(dz)
 *
 * both finite -> A-regular, (x) finite only -> A-exit, (e) finite only ->
 * A-entrance, both infinite -> A-natural.  When the scale limit at the
 * endpoint is finite, (x) equals int (s(z) - s(l)) mu_A(dz) by Fubini and
 * is evaluated in that form; an infinite scale limit forces (x) divergent
 * outright.  The classification does not depend on b as long as mu_A has
 * mass between the endpoint and b, which adjust_reference_point enforces.
 */
inline BoundaryClass classify(const DiffusionSpec& spec, const RadonMeasure& mu_A, Endpoint end,
                              double b, const ClassifyOptions& opt = {}) {
    if (!mu_A.has_mass()) throw ZeroMeasure("classify: mu_A carries no mass");
    if (!spec.interval.contains(b)) throw InvalidInterval("classify: b must be interior");

    BoundaryClass out;
    out.endpoint = end;
    out.b_used = detail::adjust_reference_point(mu_A, end, b);
    b = out.b_used;

    const bool left = end == Endpoint::Left;
    const double s_end = left ? spec.scale.limit_left() : spec.scale.limit_right();
    const ClassificationHint& hint = left ? mu_A.hint_left : mu_A.hint_right;

    if (opt.override_scale_weighted || hint.scale_weighted) {
        auto k = opt.override_scale_weighted ? *opt.override_scale_weighted : *hint.scale_weighted;
        out.scale_weighted = k == IntegralVerdict::Kind::Divergent ? IntegralVerdict::divergent()
                             : k == IntegralVerdict::Kind::Finite
                                 ? IntegralVerdict::finite(std::nan(""))
                                 : IntegralVerdict::inconclusive();
    } else if (std::isinf(s_end)) {
        out.scale_weighted = IntegralVerdict::divergent();
    } else {
        auto f = [&](double z) { return std::fabs(spec.scale(z) - s_end); };
        out.scale_weighted = mu_A.improper_integral(f, end, b, opt.improper);
    }

    {
        ImproperOptions io = opt.improper;
        io.declared = opt.override_first_moment ? opt.override_first_moment : hint.first_moment;
        double sb = spec.scale(b);
        auto f = [&](double z) { return std::fabs(sb - spec.scale(z)); };
        out.first_moment = mu_A.improper_integral(f, end, b, io);
    }

    if (!out.scale_weighted.is_inconclusive() && !out.first_moment.is_inconclusive()) {
        bool xf = out.scale_weighted.is_finite();
        bool ef = out.first_moment.is_finite();
        out.kind = xf ? (ef ? BoundaryKind::ARegular : BoundaryKind::AExit)
                      : (ef ? BoundaryKind::AEntrance : BoundaryKind::ANatural);
    }
    return out;
}

/// lim_{x -> endpoint} E^x[A_{T_y}] at an A-entrance endpoint: the first
/// scale moment of mu_A on the endpoint side of y.
inline double entrance_escape_bound(const DiffusionSpec& spec, const RadonMeasure& mu_A,
                                    Endpoint end, double y, const ClassifyOptions& opt = {}) {
    BoundaryClass cls = classify(spec, mu_A, end, y, opt);
    if (cls.require() != BoundaryKind::AEntrance)
        throw WrongClass("entrance_escape_bound: endpoint is " + to_string(*cls.kind) +
                         ", not A-entrance");
    double sy = spec.scale(y);
    auto f = [&](double z) { return std::fabs(sy - spec.scale(z)); };
    auto v = mu_A.improper_integral(f, end, y, opt.improper);
    if (!v.is_finite())
        throw InconclusiveVerdict("entrance_escape_bound: moment integral did not resolve");
    return v.value();
}

}  // namespace dpot
