#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dpot/errors.hpp"

namespace dpot {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open state interval (left, right); either end may be infinite.
struct Interval {
    double left = -kInf;
    double right = kInf;

    bool contains(double x) const { return x > left && x < right; }
    bool valid() const { return left < right; }
};

enum class Endpoint { Left, Right };

struct Atom {
    double location;
    double mass;
};

/// Outcome of an improper-integral evaluation together with the cutoff
/// trail that produced it, so callers can print why a verdict was reached.
class IntegralVerdict {
  public:
    enum class Kind { Finite, Divergent, Inconclusive };

    static IntegralVerdict finite(double value) {
        IntegralVerdict v;
        v.kind_ = Kind::Finite;
        v.value_ = value;
        return v;
    }
    static IntegralVerdict divergent() {
        IntegralVerdict v;
        v.kind_ = Kind::Divergent;
        return v;
    }
    static IntegralVerdict inconclusive() {
        IntegralVerdict v;
        v.kind_ = Kind::Inconclusive;
        return v;
    }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_divergent() const { return kind_ == Kind::Divergent; }
    bool is_inconclusive() const { return kind_ == Kind::Inconclusive; }

    /// Valid only for Finite verdicts.
    double value() const {
        if (kind_ != Kind::Finite) throw InconclusiveVerdict("verdict carries no value");
        return value_;
    }

    std::vector<double> cutoffs;       // truncation points used, in order
    std::vector<double> partial_sums;  // running partial integrals

    std::string describe() const {
        switch (kind_) {
            case Kind::Finite: return "Finite(" + std::to_string(value_) + ")";
            case Kind::Divergent: return "Divergent";
            default: return "Inconclusive";
        }
    }

  private:
    Kind kind_ = Kind::Inconclusive;
    double value_ = 0.0;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 15;
};

/// Controls for the improper-integral cutoff heuristic.  The defaults
/// follow a distance-halving schedule toward the endpoint (magnitude
/// doubling toward an infinite endpoint); divergence is declared when the
/// partial sum passes `divergence_cap` or successive increments keep a
/// ratio >= `ratio_threshold` for `ratio_run` consecutive steps.
struct ImproperOptions {
    double step_ratio = 0.5;
    int max_steps = 64;
    double divergence_cap = 1e12;
    double ratio_threshold = 0.5;
    int ratio_run = 10;
    int settle_run = 3;
    QuadratureOptions quad{};
    std::optional<IntegralVerdict::Kind> declared;  // analytic override
};

/// Declared tail behaviour of the two boundary-classification integrals at
/// one endpoint, relative to the ambient scale function.  Used to
/// short-circuit the numerical heuristic when the user knows the answer.
struct ClassificationHint {
    std::optional<IntegralVerdict::Kind> scale_weighted;  // of z -> mu((z,b)) against s(dz)
    std::optional<IntegralVerdict::Kind> first_moment;    // of |s(b)-s(z)| against mu(dz)
};

/*
 * Radon measure on an open interval, represented as an absolutely
 * continuous part (a pointwise-evaluable nonnegative density against
 * Lebesgue measure) plus finitely many atoms.  Immutable after
 * construction; all operations are const and thread-safe.
 *
 * The atom convention everywhere is half-open: integrating over (a, b]
 * picks up an atom at b and drops one at a.
 */
class RadonMeasure {
  public:
    RadonMeasure() = default;

    RadonMeasure(Interval interval, std::function<double(double)> density,
                 std::vector<Atom> atoms = {}, std::string description = {},
                 std::vector<double> density_breakpoints = {})
        : interval_(interval),
          density_(std::move(density)),
          atoms_(std::move(atoms)),
          breakpoints_(std::move(density_breakpoints)),
          description_(std::move(description)) {
        std::sort(breakpoints_.begin(), breakpoints_.end());
        if (!interval_.valid()) throw InvalidInterval("measure interval is empty");
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom& a, const Atom& b) { return a.location < b.location; });
        for (const Atom& a : atoms_) {
            if (!interval_.contains(a.location))
                throw InvalidInterval("atom lies outside the open interval");
            if (!(a.mass > 0.0) || !std::isfinite(a.mass))
                throw NonFinite("atom mass must be positive and finite");
        }
    }

    static RadonMeasure zero(Interval interval) {
        return RadonMeasure(interval, nullptr, {}, "0");
    }
    static RadonMeasure lebesgue(Interval interval, double scale = 1.0) {
        return RadonMeasure(
            interval, [scale](double) { return scale; }, {},
            std::to_string(scale) + " dx");
    }
    static RadonMeasure point_mass(Interval interval, double location, double mass) {
        return RadonMeasure(interval, nullptr, {{location, mass}});
    }

    const Interval& interval() const { return interval_; }
    bool has_density() const { return static_cast<bool>(density_); }
    double density_at(double x) const { return density_ ? density_(x) : 0.0; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::string& description() const { return description_; }

    ClassificationHint hint_left;
    ClassificationHint hint_right;

    /// Integral of f over (a, b] against this measure.  `splits` marks
    /// interior kink points of f so the quadrature never straddles them.
    double integrate(const std::function<double(double)>& f, double a, double b,
                     const std::vector<double>& splits = {},
                     const QuadratureOptions& quad = {}) const {
        if (!(a < b)) throw InvalidInterval("integrate: need a < b");
        double lo = std::max(a, interval_.left);
        double hi = std::min(b, interval_.right);
        double total = 0.0;
        if (lo < hi) {
            if (std::isinf(lo) || std::isinf(hi)) {
                total += tail_integral(f, lo, hi, splits, quad);
            } else if (density_) {
                total += density_part(f, lo, hi, splits, quad);
            }
            if (!std::isinf(lo) && !std::isinf(hi)) total += atom_part(f, a, b);
        }
        if (!std::isfinite(total)) throw NonFinite("integrate: non-finite result");
        return total;
    }

    /// Measure of (a, b].
    double mass(double a, double b, const QuadratureOptions& quad = {}) const {
        return integrate([](double) { return 1.0; }, a, b, {}, quad);
    }

    /// Cheap positivity probe for mu(interval) > 0 preconditions.
    bool has_mass() const {
        if (!atoms_.empty()) return true;
        if (!density_) return false;
        for (double p : probe_points())
            if (density_(p) > 0.0) return true;
        return false;
    }

    RadonMeasure scaled(double c) const {
        if (!(c >= 0.0)) throw NonFinite("scaled: factor must be nonnegative");
        std::vector<Atom> atoms = atoms_;
        for (Atom& a : atoms) a.mass *= c;
        if (c == 0.0) atoms.clear();
        std::function<double(double)> dens;
        if (density_ && c > 0.0) {
            auto base = density_;
            dens = [base, c](double x) { return c * base(x); };
        }
        return RadonMeasure(interval_, dens, std::move(atoms), description_, breakpoints_);
    }

    /// Pointwise-reweighted measure w(x) mu(dx); w must be nonnegative.
    RadonMeasure reweighted(const std::function<double(double)>& w,
                            std::string description = {}) const {
        std::vector<Atom> atoms = atoms_;
        for (Atom& a : atoms) a.mass *= w(a.location);
        std::erase_if(atoms, [](const Atom& a) { return a.mass <= 0.0; });
        std::function<double(double)> dens;
        if (density_) {
            auto base = density_;
            dens = [base, w](double x) { return w(x) * base(x); };
        }
        return RadonMeasure(interval_, dens, std::move(atoms), std::move(description),
                            breakpoints_);
    }

    RadonMeasure plus(const RadonMeasure& other) const {
        if (interval_.left != other.interval_.left || interval_.right != other.interval_.right)
            throw InvalidInterval("plus: measures live on different intervals");
        std::vector<Atom> atoms;
        atoms.reserve(atoms_.size() + other.atoms_.size());
        atoms.insert(atoms.end(), atoms_.begin(), atoms_.end());
        atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
        std::function<double(double)> dens;
        if (density_ && other.density_) {
            auto d1 = density_, d2 = other.density_;
            dens = [d1, d2](double x) { return d1(x) + d2(x); };
        } else if (density_) {
            dens = density_;
        } else if (other.density_) {
            dens = other.density_;
        }
        std::vector<double> bps = breakpoints_;
        bps.insert(bps.end(), other.breakpoints_.begin(), other.breakpoints_.end());
        return RadonMeasure(interval_, dens, std::move(atoms), "", std::move(bps));
    }

    /// Improper integral of a nonnegative f over the tail toward one
    /// endpoint, up to the reference point b.  Evaluates nested truncations
    /// and classifies the partial-sum trail; see ImproperOptions.
    IntegralVerdict improper_integral(const std::function<double(double)>& f, Endpoint end,
                                      double b, const ImproperOptions& opt = {}) const {
        if (opt.declared && *opt.declared != IntegralVerdict::Kind::Finite) {
            return *opt.declared == IntegralVerdict::Kind::Divergent
                       ? IntegralVerdict::divergent()
                       : IntegralVerdict::inconclusive();
        }
        const bool left = end == Endpoint::Left;
        const double endpoint = left ? interval_.left : interval_.right;
        if (!interval_.contains(b)) throw InvalidInterval("improper_integral: b not interior");

        std::vector<double> cutoffs;
        std::vector<double> partials;
        double sum = 0.0;
        double prev_cut = b;
        double prev_inc = -1.0;
        int run_ratio = 0;
        int run_settle = 0;
        const double floor = opt.quad.abs_tol;

        auto finish = [&](IntegralVerdict v) {
            v.cutoffs = std::move(cutoffs);
            v.partial_sums = std::move(partials);
            return v;
        };

        for (int k = 1; k <= opt.max_steps; ++k) {
            double cut = next_cutoff(endpoint, b, k, opt.step_ratio);
            double lo = left ? cut : prev_cut;
            double hi = left ? prev_cut : cut;
            double inc;
            try {
                inc = slice(f, lo, hi, opt.quad);
            } catch (const NonFinite&) {
                if (opt.declared) break;
                return finish(IntegralVerdict::divergent());
            }
            if (!std::isfinite(inc)) {
                if (opt.declared) break;
                return finish(IntegralVerdict::divergent());
            }
            sum += inc;
            cutoffs.push_back(cut);
            partials.push_back(sum);

            if (sum > opt.divergence_cap) {
                if (opt.declared) break;  // kind is declared; keep the best partial value
                return finish(IntegralVerdict::divergent());
            }

            if (std::fabs(inc) <= floor + opt.quad.rel_tol * std::fabs(sum)) {
                run_settle += 1;
                run_ratio = 0;
                if (run_settle >= opt.settle_run) return finish(IntegralVerdict::finite(sum));
            } else {
                run_settle = 0;
                if (prev_inc > floor && inc >= opt.ratio_threshold * prev_inc)
                    run_ratio += 1;
                else
                    run_ratio = 0;
                if (run_ratio >= opt.ratio_run && !opt.declared)
                    return finish(IntegralVerdict::divergent());
            }
            prev_inc = inc;
            prev_cut = cut;
        }
        if (opt.declared && *opt.declared == IntegralVerdict::Kind::Finite)
            return finish(IntegralVerdict::finite(sum));
        return finish(IntegralVerdict::inconclusive());
    }

  private:
    static double next_cutoff(double endpoint, double b, int k, double ratio) {
        if (std::isinf(endpoint)) {
            double m = std::max(1.0, std::fabs(b));
            double dist = m * std::pow(1.0 / ratio, k);
            return endpoint < 0 ? b - dist : b + dist;
        }
        return endpoint + (b - endpoint) * std::pow(ratio, k);
    }

    double density_part(const std::function<double(double)>& f, double lo, double hi,
                        const std::vector<double>& splits, const QuadratureOptions& quad) const {
        std::vector<double> pts{lo, hi};
        for (double s : splits)
            if (s > lo && s < hi) pts.push_back(s);
        for (double s : breakpoints_)
            if (s > lo && s < hi) pts.push_back(s);
        std::sort(pts.begin(), pts.end());
        auto dens = density_;
        auto integrand = [&f, &dens](double x) { return f(x) * dens(x); };
        double total = 0.0;
        using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (pts[i + 1] <= pts[i]) continue;
            double err = 0.0;
            double part = GK::integrate(integrand, pts[i], pts[i + 1],
                                        quad.max_depth, quad.rel_tol, &err);
            if (!std::isfinite(part)) throw NonFinite("quadrature produced non-finite value");
            total += part;
        }
        return total;
    }

    double atom_part(const std::function<double(double)>& f, double a, double b) const {
        double total = 0.0;
        auto first = std::upper_bound(atoms_.begin(), atoms_.end(), a,
                                      [](double v, const Atom& at) { return v < at.location; });
        for (auto it = first; it != atoms_.end() && it->location <= b; ++it)
            total += f(it->location) * it->mass;
        return total;
    }

    /// Integral over a range with one or both ends infinite: sum a compact
    /// core plus improper tails, demanding Finite verdicts.
    double tail_integral(const std::function<double(double)>& f, double lo, double hi,
                         const std::vector<double>& splits, const QuadratureOptions& quad) const {
        double core_lo = std::isinf(lo) ? std::min(-1.0, hi - 1.0) : lo;
        double core_hi = std::isinf(hi) ? std::max(1.0, lo + 1.0) : hi;
        if (std::isinf(lo) && std::isinf(hi)) {
            core_lo = -1.0;
            core_hi = 1.0;
        }
        double total = integrate(f, core_lo, core_hi, splits, quad);
        ImproperOptions opt;
        opt.quad = quad;
        if (std::isinf(lo)) {
            auto v = improper_integral(f, Endpoint::Left, core_lo, opt);
            if (!v.is_finite()) throw NonFinite("integrate: left tail does not converge");
            total += v.value();
        }
        if (std::isinf(hi)) {
            auto v = improper_integral(f, Endpoint::Right, core_hi, opt);
            if (!v.is_finite()) throw NonFinite("integrate: right tail does not converge");
            total += v.value();
        }
        return total;
    }

    double slice(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureOptions& quad) const {
        double total = atom_part(f, lo, hi);
        if (density_) total += density_part(f, lo, hi, {}, quad);
        return total;
    }

    std::vector<double> probe_points() const {
        double lo = std::isinf(interval_.left) ? -64.0 : interval_.left;
        double hi = std::isinf(interval_.right) ? 64.0 : interval_.right;
        double mid = 0.5 * (lo + hi);
        std::vector<double> pts;
        for (int i = 1; i < 16; ++i) pts.push_back(lo + (hi - lo) * i / 16.0);
        for (int k = 1; k <= 24; ++k) {
            pts.push_back(lo + (mid - lo) * std::pow(0.5, k));
            pts.push_back(hi - (hi - mid) * std::pow(0.5, k));
        }
        return pts;
    }

    Interval interval_;
    std::function<double(double)> density_;
    std::vector<Atom> atoms_;
    std::vector<double> breakpoints_;
    std::string description_;
};

}  // namespace dpot
