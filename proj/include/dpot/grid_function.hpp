#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpot/diffusion.hpp"
#include "dpot/errors.hpp"
#include "dpot/scale.hpp"

namespace dpot {

enum class Side { Left, Right };

/*
 * Function of the state variable sampled on a strictly increasing grid,
 * interpolated linearly in the scale coordinate.  An optional closed form
 * makes evaluation and one-sided s-derivatives exact instead of
 * piecewise-linear.  Immutable once built.
 */
class GridFunction {
  public:
    GridFunction() = default;

    GridFunction(ScaleFunction scale, std::vector<double> grid, std::vector<double> values,
                 std::function<double(double)> closed_form = nullptr)
        : scale_(std::move(scale)),
          grid_(std::move(grid)),
          values_(std::move(values)),
          closed_form_(std::move(closed_form)) {
        if (grid_.size() != values_.size() || grid_.size() < 2)
            throw InvalidInterval("grid function needs matching grid/values with >= 2 points");
        for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
            if (!(grid_[i] < grid_[i + 1]))
                throw InvalidInterval("grid must be strictly increasing");
        for (double v : values_)
            if (!std::isfinite(v)) throw NonFinite("grid function values must be finite");
        s_.reserve(grid_.size());
        for (double x : grid_) s_.push_back(scale_(x));
    }

    static GridFunction sample(ScaleFunction scale, std::vector<double> grid,
                               const std::function<double(double)>& fn) {
        std::vector<double> values;
        values.reserve(grid.size());
        for (double x : grid) values.push_back(fn(x));
        return GridFunction(std::move(scale), std::move(grid), std::move(values), fn);
    }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& s_values() const { return s_; }
    const ScaleFunction& scale() const { return scale_; }
    bool has_closed_form() const { return static_cast<bool>(closed_form_); }
    const std::function<double(double)>& closed_form() const { return closed_form_; }

    double operator()(double x) const {
        if (closed_form_) return closed_form_(x);
        return interpolate(scale_(x));
    }

    /// Piecewise-linear evaluation in the scale coordinate (ignores any
    /// closed form); linear extrapolation with the end slopes outside the
    /// grid hull.
    double interpolate(double sx) const {
        std::size_t j = cell_of(sx);
        double w = (sx - s_[j]) / (s_[j + 1] - s_[j]);
        return values_[j] + w * (values_[j + 1] - values_[j]);
    }

    /// One-sided derivative with respect to the scale coordinate.  Closed
    /// forms use shrinking one-sided offsets with Richardson refinement;
    /// sampled data uses the adjacent cell quotient.
    double s_derivative(double x, Side side) const {
        if (closed_form_) return closed_form_s_derivative(x, side);
        double sx = scale_(x);
        const double eps = 1e-12 * (1.0 + std::fabs(sx));
        std::size_t n = grid_.size();
        // At a grid node take the quotient of the cell on the requested side.
        for (std::size_t i = 0; i < n; ++i) {
            if (std::fabs(sx - s_[i]) <= eps) {
                if (side == Side::Left) {
                    std::size_t j = i == 0 ? 0 : i - 1;
                    return quotient(j);
                }
                std::size_t j = i + 1 >= n ? n - 2 : i;
                return quotient(j);
            }
        }
        return quotient(cell_of(sx));
    }

    double min_value() const { return values_[argmin()]; }

    /// Leftmost minimiser over the grid.
    std::size_t argmin() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < values_.size(); ++i)
            if (values_[i] < values_[best]) best = i;
        return best;
    }

    bool nondecreasing(double tol = 1e-10) const {
        for (std::size_t j = 0; j + 1 < grid_.size(); ++j)
            if (quotient(j) < -tol) return false;
        return true;
    }
    bool nonincreasing(double tol = 1e-10) const {
        for (std::size_t j = 0; j + 1 < grid_.size(); ++j)
            if (quotient(j) > tol) return false;
        return true;
    }

    double quotient(std::size_t cell) const {
        return (values_[cell + 1] - values_[cell]) / (s_[cell + 1] - s_[cell]);
    }

    /// Same function rebased onto another grid (keeps the closed form).
    GridFunction rebased(std::vector<double> grid) const {
        std::vector<double> values;
        values.reserve(grid.size());
        for (double x : grid) values.push_back((*this)(x));
        return GridFunction(scale_, std::move(grid), std::move(values), closed_form_);
    }

  private:
    std::size_t cell_of(double sx) const {
        auto it = std::upper_bound(s_.begin(), s_.end(), sx);
        if (it == s_.begin()) return 0;
        std::size_t j = static_cast<std::size_t>(it - s_.begin()) - 1;
        return std::min(j, s_.size() - 2);
    }

    double closed_form_s_derivative(double x, Side side) const {
        double sx = scale_(x);
        double slim = side == Side::Left ? scale_.limit_left() : scale_.limit_right();
        (void)slim;
        double sgn = side == Side::Right ? 1.0 : -1.0;
        double gx = closed_form_(x);
        double h0 = 1e-2 * (1.0 + std::fabs(sx));
        // Guard against stepping past the interval end.
        double s_end = side == Side::Right ? scale_.limit_right() : scale_.limit_left();
        if (std::isfinite(s_end)) {
            double room = std::fabs(s_end - sx);
            if (room <= 0.0)
                throw Error("s_derivative: no room on the requested side");
            h0 = std::min(h0, 0.25 * room);
        }
        // First-order one-sided quotients at h, h/4, h/16, ...; two
        // Richardson sweeps.  The level is picked by balancing the observed
        // settling gap against the rounding noise eps*|g|/h, which grows as
        // h shrinks.
        constexpr int kLevels = 8;
        constexpr double kEps = 2.3e-16;
        double q[kLevels], hs[kLevels];
        for (int k = 0; k < kLevels; ++k) {
            double h = h0 * std::pow(0.25, k);
            double xk = scale_.inverse(sx + sgn * h);
            q[k] = (closed_form_(xk) - gx) / (sgn * h);
            hs[k] = h;
        }
        double r1[kLevels - 1], r2[kLevels - 2];
        for (int k = 0; k + 1 < kLevels; ++k) r1[k] = (4.0 * q[k + 1] - q[k]) / 3.0;
        for (int k = 0; k + 2 < kLevels; ++k) r2[k] = (16.0 * r1[k + 1] - r1[k]) / 15.0;
        double best = r2[kLevels - 3];
        double best_score = kInf;
        for (int k = 0; k + 3 < kLevels; ++k) {
            double noise = 8.0 * kEps * (std::fabs(gx) + 1.0) / hs[k + 3];
            double score = std::fabs(r2[k + 1] - r2[k]) + noise;
            if (score < best_score) {
                best_score = score;
                best = r2[k + 1];
            }
        }
        return best;
    }

    ScaleFunction scale_;
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> s_;
    std::function<double(double)> closed_form_;
};

struct SubharmonicViolation {
    enum class Kind { Negative, NonConvex } kind;
    double location;
    double magnitude;
};

struct SubharmonicCheck {
    bool ok = true;
    std::optional<SubharmonicViolation> first_violation;
};

/// A nonnegative function convex in the scale coordinate passes; the first
/// negativity or convexity violation beyond tolerance is reported.
inline SubharmonicCheck check_subharmonic(const GridFunction& g, double tol = 1e-9) {
    SubharmonicCheck out;
    const auto& grid = g.grid();
    const auto& values = g.values();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (values[i] < -tol) {
            out.ok = false;
            out.first_violation = {SubharmonicViolation::Kind::Negative, grid[i], -values[i]};
            return out;
        }
    }
    for (std::size_t j = 0; j + 2 < grid.size(); ++j) {
        double q0 = g.quotient(j), q1 = g.quotient(j + 1);
        double slack = tol * (1.0 + std::fabs(q0) + std::fabs(q1));
        if (q0 > q1 + slack) {
            out.ok = false;
            out.first_violation = {SubharmonicViolation::Kind::NonConvex, grid[j + 1], q0 - q1};
            return out;
        }
    }
    return out;
}

}  // namespace dpot
