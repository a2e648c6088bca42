#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dpot/errors.hpp"
#include "dpot/measure.hpp"

namespace dpot {

/*
 * Strictly increasing continuous scale function on an open interval,
 * with its inverse, pointwise derivative, endpoint limits s(l+), s(r-)
 * and the induced Lebesgue-Stieltjes measure s(dy).
 *
 * Supplied either analytically (forward map plus optional inverse and
 * derivative; missing pieces fall back to bisection and central
 * differences) or as a monotone table interpolated with a
 * Fritsch-Carlson monotone cubic and inverted by bisection.
 *
 * Copies share one immutable implementation, so passing ScaleFunction
 * by value is cheap and thread-safe.
 */
class ScaleFunction {
  public:
    ScaleFunction() = default;

    double operator()(double x) const { return impl_->fwd(x); }
    double inverse(double u) const { return impl_->inv(u); }
    double derivative(double x) const { return impl_->deriv(x); }

    const Interval& interval() const { return impl_->interval; }
    double limit_left() const { return impl_->s_left; }
    double limit_right() const { return impl_->s_right; }
    /// True when an endpoint limit was estimated numerically rather than
    /// declared by the caller.
    bool limits_estimated() const { return impl_->limits_estimated; }

    /// Integral of f against s(dy) over (a, b], computed exactly through
    /// the substitution u = s(y).
    double stieltjes(const std::function<double(double)>& f, double a, double b,
                     const QuadratureOptions& quad = {}) const {
        if (!(a < b)) throw InvalidInterval("stieltjes: need a < b");
        double ua = impl_->fwd(a);
        double ub = impl_->fwd(b);
        auto inv = [this](double u) { return impl_->inv(u); };
        auto integrand = [&f, &inv](double u) { return f(inv(u)); };
        double err = 0.0;
        using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
        double v = GK::integrate(integrand, ua, ub, quad.max_depth, quad.rel_tol, &err);
        if (!std::isfinite(v)) throw NonFinite("stieltjes integral is non-finite");
        return v;
    }

    /// s(dy) as a Radon measure (density = ds/dx).
    RadonMeasure stieltjes_measure() const {
        auto self = impl_;
        return RadonMeasure(
            impl_->interval, [self](double x) { return self->deriv(x); }, {}, "s(dy)");
    }

    static ScaleFunction natural(Interval interval) {
        auto impl = std::make_shared<Impl>();
        impl->interval = interval;
        impl->fwd = [](double x) { return x; };
        impl->inv = [](double u) { return u; };
        impl->deriv = [](double) { return 1.0; };
        impl->s_left = interval.left;
        impl->s_right = interval.right;
        return ScaleFunction(std::move(impl));
    }

    static ScaleFunction from_functions(Interval interval, std::function<double(double)> fwd,
                                        std::function<double(double)> inv = nullptr,
                                        std::function<double(double)> deriv = nullptr,
                                        std::optional<double> declared_left = {},
                                        std::optional<double> declared_right = {}) {
        auto impl = std::make_shared<Impl>();
        impl->interval = interval;
        impl->fwd = std::move(fwd);
        if (deriv) {
            impl->deriv = std::move(deriv);
        } else {
            auto f = impl->fwd;
            impl->deriv = [f, interval](double x) { return central_difference(f, x, interval); };
        }
        if (declared_left)
            impl->s_left = *declared_left;
        else {
            impl->s_left = estimate_limit(impl->fwd, interval, Endpoint::Left);
            impl->limits_estimated = true;
        }
        if (declared_right)
            impl->s_right = *declared_right;
        else {
            impl->s_right = estimate_limit(impl->fwd, interval, Endpoint::Right);
            impl->limits_estimated = true;
        }
        if (inv) {
            impl->inv = std::move(inv);
        } else {
            auto f = impl->fwd;
            Interval iv = interval;
            impl->inv = [f, iv](double u) { return bisect_inverse(f, iv, u); };
        }
        validate(*impl);
        return ScaleFunction(std::move(impl));
    }

    /// Monotone table (x_i, s_i); interpolated by a monotone cubic inside
    /// the knot hull and linearly with the end slopes outside it.
    static ScaleFunction from_table(Interval interval, std::vector<double> xs,
                                    std::vector<double> ss,
                                    std::optional<double> declared_left = {},
                                    std::optional<double> declared_right = {}) {
        if (xs.size() != ss.size() || xs.size() < 2)
            throw InvalidInterval("scale table needs at least two rows");
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            if (!(xs[i] < xs[i + 1] && ss[i] < ss[i + 1]))
                throw InvalidInterval("scale table must be strictly increasing");
        auto cubic = std::make_shared<MonotoneCubic>(std::move(xs), std::move(ss));
        auto fwd = [cubic](double x) { return cubic->eval(x); };
        auto deriv = [cubic](double x) { return cubic->slope(x); };
        return from_functions(interval, fwd, nullptr, deriv, declared_left, declared_right);
    }

  private:
    struct Impl {
        Interval interval;
        std::function<double(double)> fwd, inv, deriv;
        double s_left = -kInf, s_right = kInf;
        bool limits_estimated = false;
    };

    explicit ScaleFunction(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

    static void validate(const Impl& impl) {
        double lo = std::isinf(impl.interval.left) ? -8.0 : impl.interval.left;
        double hi = std::isinf(impl.interval.right) ? 8.0 : impl.interval.right;
        double prev = -kInf;
        for (int i = 1; i < 16; ++i) {
            double x = lo + (hi - lo) * i / 16.0;
            double v = impl.fwd(x);
            if (!(v > prev)) throw InvalidInterval("scale function is not strictly increasing");
            prev = v;
        }
        if (!(impl.s_left < impl.s_right))
            throw InvalidInterval("scale limits are not ordered");
    }

    static double central_difference(const std::function<double(double)>& f, double x,
                                     Interval iv) {
        double h = 1e-6 * (1.0 + std::fabs(x));
        double lo = std::max(x - h, iv.left), hi = std::min(x + h, iv.right);
        if (!(lo < hi)) throw InvalidInterval("derivative point outside interval");
        return (f(hi) - f(lo)) / (hi - lo);
    }

    static double estimate_limit(const std::function<double(double)>& f, Interval iv,
                                 Endpoint end) {
        const bool left = end == Endpoint::Left;
        const double endpoint = left ? iv.left : iv.right;
        double ref = std::isinf(iv.left) || std::isinf(iv.right)
                         ? (std::isinf(iv.left) && std::isinf(iv.right)
                                ? 0.0
                                : (std::isinf(iv.left) ? iv.right - 1.0 : iv.left + 1.0))
                         : 0.5 * (iv.left + iv.right);
        double prev = f(ref);
        for (int k = 1; k <= 48; ++k) {
            double x;
            if (std::isinf(endpoint)) {
                double dist = std::max(1.0, std::fabs(ref)) * std::pow(2.0, k);
                x = left ? ref - dist : ref + dist;
            } else {
                double base = left ? std::min(ref, iv.right) : std::max(ref, iv.left);
                double dist = (left ? base - endpoint : endpoint - base) * std::pow(0.5, k);
                x = left ? endpoint + dist : endpoint - dist;
            }
            double v = f(x);
            if (std::fabs(v) > 1e12 || !std::isfinite(v)) return left ? -kInf : kInf;
            if (std::fabs(v - prev) <= 1e-9 * (1.0 + std::fabs(v))) return v;
            prev = v;
        }
        return left ? -kInf : kInf;  // unresolved slow growth; treated as unbounded
    }

    static double bisect_inverse(const std::function<double(double)>& f, Interval iv, double u) {
        double lo = std::isinf(iv.left) ? -1.0 : iv.left + 1e-300;
        double hi = std::isinf(iv.right) ? 1.0 : iv.right - 1e-300;
        if (!std::isinf(iv.left) && !std::isinf(iv.right)) {
            double w = iv.right - iv.left;
            lo = iv.left + 1e-14 * w;
            hi = iv.right - 1e-14 * w;
        }
        for (int k = 0; k < 80 && f(lo) > u; ++k) {
            if (!std::isinf(iv.left)) {
                lo = iv.left + (lo - iv.left) * 0.25;
            } else {
                lo = lo < 0 ? lo * 4.0 : -1.0;
            }
        }
        for (int k = 0; k < 80 && f(hi) < u; ++k) {
            if (!std::isinf(iv.right)) {
                hi = iv.right - (iv.right - hi) * 0.25;
            } else {
                hi = hi > 0 ? hi * 4.0 : 1.0;
            }
        }
        if (f(lo) > u || f(hi) < u) throw NonFinite("inverse: value outside scale range");
        for (int k = 0; k < 200; ++k) {
            double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (f(mid) < u)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    /// Fritsch-Carlson monotone cubic interpolant.
    struct MonotoneCubic {
        std::vector<double> x, y, m;

        MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
            : x(std::move(xs)), y(std::move(ys)), m(x.size()) {
            std::size_t n = x.size();
            std::vector<double> d(n - 1);
            for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
            m[0] = d[0];
            m[n - 1] = d[n - 2];
            for (std::size_t i = 1; i + 1 < n; ++i) m[i] = 0.5 * (d[i - 1] + d[i]);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                double a = m[i] / d[i], b = m[i + 1] / d[i];
                double s = a * a + b * b;
                if (s > 9.0) {
                    double t = 3.0 / std::sqrt(s);
                    m[i] = t * a * d[i];
                    m[i + 1] = t * b * d[i];
                }
            }
        }

        std::size_t cell(double xv) const {
            auto it = std::upper_bound(x.begin(), x.end(), xv);
            if (it == x.begin()) return 0;
            std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
            return std::min(i, x.size() - 2);
        }

        double eval(double xv) const {
            if (xv <= x.front()) return y.front() + m.front() * (xv - x.front());
            if (xv >= x.back()) return y.back() + m.back() * (xv - x.back());
            std::size_t i = cell(xv);
            double h = x[i + 1] - x[i], t = (xv - x[i]) / h;
            double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
            double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
            return h00 * y[i] + h10 * h * m[i] + h01 * y[i + 1] + h11 * h * m[i + 1];
        }

        double slope(double xv) const {
            if (xv <= x.front()) return m.front();
            if (xv >= x.back()) return m.back();
            std::size_t i = cell(xv);
            double h = x[i + 1] - x[i], t = (xv - x[i]) / h;
            double d00 = (6 * t * t - 6 * t) / h, d10 = 3 * t * t - 4 * t + 1;
            double d01 = (6 * t - 6 * t * t) / h, d11 = 3 * t * t - 2 * t;
            return d00 * y[i] + d10 * m[i] + d01 * y[i + 1] + d11 * m[i + 1];
        }
    };

    std::shared_ptr<const Impl> impl_ = natural_impl();

    static std::shared_ptr<const Impl> natural_impl() {
        static const std::shared_ptr<const Impl> impl = [] {
            auto p = std::make_shared<Impl>();
            p->interval = Interval{-kInf, kInf};
            p->fwd = [](double x) { return x; };
            p->inv = [](double u) { return u; };
            p->deriv = [](double) { return 1.0; };
            p->s_left = -kInf;
            p->s_right = kInf;
            return p;
        }();
        return impl;
    }
};

}  // namespace dpot
