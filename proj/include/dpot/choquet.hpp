#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "dpot/errors.hpp"
#include "dpot/grid_function.hpp"
#include "dpot/measure.hpp"

namespace dpot {

/*
 * Measure extracted from the convexity of a grid function: finitely many
 * atoms plus cells carrying mass spread uniformly in the scale coordinate.
 * Cells are placed so that their s-midpoint coincides with the true
 * s-barycenter of the mass they represent, which keeps the linear kernels
 * (s(x) - s(y))^+ and (s(y) - s(x))^+ exact at every grid node.
 */
struct PiecewiseMeasure {
    struct Cell {
        double y_lo, y_hi;  // state-space support
        double s_lo, s_hi;  // scale-space support (uniform density here)
        double mass;
    };
    std::vector<Cell> cells;
    std::vector<Atom> atoms;  // atom.location in state space
    std::vector<double> atom_s;

    double total() const {
        double t = 0.0;
        for (const Cell& c : cells) t += c.mass;
        for (const Atom& a : atoms) t += a.mass;
        return t;
    }

    bool empty() const { return cells.empty() && atoms.empty(); }

    /// Measure of { y : s(y) <= sx }.
    double cumulative(double sx) const {
        double t = 0.0;
        for (const Cell& c : cells) {
            if (sx >= c.s_hi)
                t += c.mass;
            else if (sx > c.s_lo)
                t += c.mass * (sx - c.s_lo) / (c.s_hi - c.s_lo);
        }
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (atom_s[i] <= sx) t += atoms[i].mass;
        return t;
    }

    /// int (sx - s(y))^+ dmu, exact for the stored representation.
    double kernel_plus(double sx) const {
        double t = 0.0;
        for (const Cell& c : cells) {
            if (sx >= c.s_hi)
                t += c.mass * (sx - 0.5 * (c.s_lo + c.s_hi));
            else if (sx > c.s_lo) {
                double w = sx - c.s_lo;
                t += c.mass / (c.s_hi - c.s_lo) * 0.5 * w * w;
            }
        }
        for (std::size_t i = 0; i < atoms.size(); ++i)
            t += atoms[i].mass * std::max(sx - atom_s[i], 0.0);
        return t;
    }

    /// int (s(y) - sx)^+ dmu.
    double kernel_minus(double sx) const {
        double t = 0.0;
        for (const Cell& c : cells) {
            if (sx <= c.s_lo)
                t += c.mass * (0.5 * (c.s_lo + c.s_hi) - sx);
            else if (sx < c.s_hi) {
                double w = c.s_hi - sx;
                t += c.mass / (c.s_hi - c.s_lo) * 0.5 * w * w;
            }
        }
        for (std::size_t i = 0; i < atoms.size(); ++i)
            t += atoms[i].mass * std::max(atom_s[i] - sx, 0.0);
        return t;
    }

    RadonMeasure to_radon(const ScaleFunction& scale, Interval interval) const {
        auto cells_copy = cells;
        std::sort(cells_copy.begin(), cells_copy.end(),
                  [](const Cell& a, const Cell& b) { return a.y_lo < b.y_lo; });
        std::vector<double> breaks;
        for (const Cell& c : cells_copy) {
            breaks.push_back(c.y_lo);
            breaks.push_back(c.y_hi);
        }
        auto sc = scale;
        auto dens = [cells_copy, sc](double y) {
            for (const Cell& c : cells_copy) {
                if (y >= c.y_lo && y <= c.y_hi)
                    return c.mass / (c.s_hi - c.s_lo) * sc.derivative(y);
            }
            return 0.0;
        };
        std::function<double(double)> d;
        if (!cells_copy.empty()) d = dens;
        return RadonMeasure(interval, d, atoms, "", std::move(breaks));
    }
};

/// g(x) = alpha + kappa1 (s(x) - s(l)) + kappa2 (s(r) - s(x))
///        + int (s(x)-s(y))^+ mu1(dy) + int (s(y)-s(x))^+ mu2(dy).
struct ChoquetDecomposition {
    double alpha = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double cstar = 0.0;  // minimising point; may be an interval endpoint
    double s_anchor_left = 0.0;
    double s_anchor_right = 0.0;
    PiecewiseMeasure mu1;
    PiecewiseMeasure mu2;
    ScaleFunction scale;
};

struct ChoquetOptions {
    double jump_factor = 10.0;    // node jump vs local average => atom
    double mass_floor = 1e-12;    // drop cells/atoms below this mass
    double slope_tol = 1e-10;     // "slope has vanished" near an endpoint
    double value_tol = 1e-10;
    double subharmonic_tol = 2e-7;
    int max_extension = 64;
    int refine_rounds = 3;
};

namespace detail {

struct NodeData {
    std::vector<double> x, s, g, dplus, dminus;
    std::size_t size() const { return x.size(); }
};

inline NodeData evaluate_nodes(const GridFunction& g, const std::vector<double>& grid) {
    NodeData nd;
    nd.x = grid;
    const ScaleFunction& sc = g.scale();
    nd.s.reserve(grid.size());
    nd.g.reserve(grid.size());
    for (double x : grid) {
        nd.s.push_back(sc(x));
        nd.g.push_back(g(x));
    }
    std::size_t n = grid.size();
    nd.dplus.resize(n);
    nd.dminus.resize(n);
    if (g.has_closed_form()) {
        for (std::size_t i = 0; i < n; ++i) {
            nd.dplus[i] = g.s_derivative(grid[i], Side::Right);
            nd.dminus[i] = g.s_derivative(grid[i], Side::Left);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double ql = i > 0 ? (nd.g[i] - nd.g[i - 1]) / (nd.s[i] - nd.s[i - 1]) : 0.0;
            double qr = i + 1 < n ? (nd.g[i + 1] - nd.g[i]) / (nd.s[i + 1] - nd.s[i]) : 0.0;
            nd.dminus[i] = i > 0 ? ql : qr;
            nd.dplus[i] = i + 1 < n ? qr : ql;
        }
    }
    return nd;
}

/*
 * Extract the convexity measure of g over the node range [i0, i1] into
 * atoms and barycentred cells.
 *
 * Node jumps d+(x_i) - d-(x_i) are kink masses; they become atoms when
 * they dominate the local mass scale by `jump_factor`, and are otherwise
 * spread as a short cell centred at the node.  Mass strictly inside a
 * cell is d-(x_{j+1}) - d+(x_j) with its s-moment recovered from
 *
 *     int_(a,b) s dmu = s(b) d-(b) - s(a) d+(a) - (g(b) - g(a)),
 *
 * so the stored cell sits exactly at the true barycentre.  The slope the
 * extraction starts from at i0 (resp. ends with at i1) is overridden by
 * the caller: boundary terms such as kappa or a carry atom are accounted
 * there.  Returns locations worth refining (suspiciously concentrated
 * cells) via `refine`.
 */
inline PiecewiseMeasure extract_measure(const NodeData& nd, std::size_t i0, std::size_t i1,
                                        double entry_slope, double exit_slope,
                                        bool data_grid, const ChoquetOptions& opt,
                                        const ScaleFunction& scale,
                                        std::vector<double>* refine) {
    PiecewiseMeasure out;
    if (i1 <= i0) return out;
    std::size_t n = i1 - i0 + 1;

    // Node jump masses, with the boundary slopes replacing the one-sided
    // derivatives that fall outside the region.
    std::vector<double> jump(n, 0.0), cell_mass(n - 1, 0.0), cell_moment(n - 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t i = i0 + k;
        double dm = k == 0 ? entry_slope : nd.dminus[i];
        double dp = k == n - 1 ? exit_slope : nd.dplus[i];
        jump[k] = dp - dm;
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t j = i0 + k;
        cell_mass[k] = nd.dminus[j + 1] - nd.dplus[j];
        cell_moment[k] = nd.s[j + 1] * nd.dminus[j + 1] - nd.s[j] * nd.dplus[j] -
                         (nd.g[j + 1] - nd.g[j]);
    }

    double mass_scale = 0.0;
    for (double m : cell_mass) mass_scale += std::fabs(m);
    for (double m : jump) mass_scale += std::fabs(m);
    double floor = std::max(opt.mass_floor, 1e-9 * mass_scale / std::max<std::size_t>(n, 1));

    auto local_average = [&](const std::vector<double>& v, std::size_t k) {
        double acc = 0.0;
        int cnt = 0;
        for (std::size_t w = (k >= 4 ? k - 4 : 0); w < std::min(v.size(), k + 5); ++w) {
            if (w == k) continue;
            acc += std::fabs(v[w]);
            ++cnt;
        }
        return cnt > 0 ? acc / cnt : 0.0;
    };

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t i = i0 + k;
        double m = jump[k];
        if (m <= floor) continue;
        bool as_atom = true;
        if (data_grid && k > 0 && k + 1 < n) {
            double avg = std::max(local_average(jump, k), floor);
            as_atom = m > opt.jump_factor * avg;
        }
        if (as_atom) {
            out.atoms.push_back({nd.x[i], m});
            out.atom_s.push_back(nd.s[i]);
        } else {
            double wl = i > 0 ? 0.5 * (nd.s[i] - nd.s[i - 1]) : 0.0;
            double wr = i + 1 < nd.size() ? 0.5 * (nd.s[i + 1] - nd.s[i]) : 0.0;
            double w = wl > 0.0 && wr > 0.0 ? std::min(wl, wr) : std::max(wl, wr);
            if (w <= 0.0) {
                out.atoms.push_back({nd.x[i], m});
                out.atom_s.push_back(nd.s[i]);
            } else {
                double slo = nd.s[i] - w, shi = nd.s[i] + w;
                out.cells.push_back({scale.inverse(slo), scale.inverse(shi), slo, shi, m});
            }
        }
    }

    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t j = i0 + k;
        double m = cell_mass[k];
        if (m <= floor) continue;
        double c = cell_moment[k] / m;
        c = std::clamp(c, nd.s[j], nd.s[j + 1]);
        double w = std::min(c - nd.s[j], nd.s[j + 1] - c);
        if (refine && !data_grid) {
            double avg = std::max(local_average(cell_mass, k), floor);
            if (m > opt.jump_factor * avg) {
                double y = scale.inverse(c);
                if (y > nd.x[j] + 1e-13 * (1.0 + std::fabs(nd.x[j])) &&
                    y < nd.x[j + 1] - 1e-13 * (1.0 + std::fabs(nd.x[j + 1]))) {
                    refine->push_back(y);
                    continue;
                }
            }
        }
        if (w <= 0.0) {
            out.atoms.push_back({scale.inverse(c), m});
            out.atom_s.push_back(c);
        } else {
            double slo = c - w, shi = c + w;
            out.cells.push_back({scale.inverse(slo), scale.inverse(shi), slo, shi, m});
        }
    }
    return out;
}

/// Extend a closed-form grid toward an endpoint until the function value
/// and one-sided slope settle (infinite scale limit) or the scale gap to
/// the endpoint is negligible (finite limit).
inline std::vector<double> extended_grid(const GridFunction& g, const ChoquetOptions& opt) {
    std::vector<double> grid = g.grid();
    if (!g.has_closed_form()) return grid;
    const ScaleFunction& sc = g.scale();
    double span = g.s_values().back() - g.s_values().front();
    double slope_scale = 0.0, min_q = kInf, max_q = -kInf;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        double q = g.quotient(j);
        slope_scale = std::max(slope_scale, std::fabs(q));
        min_q = std::min(min_q, q);
        max_q = std::max(max_q, q);
    }
    double mono_tol = 1e-10 * (1.0 + slope_scale);
    // Only the side anchoring the boundary terms needs resolving: the left
    // endpoint for a nondecreasing g, the right one for a nonincreasing g.
    // A non-monotone g anchors at its interior minimum.
    bool extend_left = min_q >= -mono_tol;
    bool extend_right = max_q <= mono_tol;

    auto settled = [&](double x, Side side) {
        double d = g.s_derivative(x, side);
        return std::fabs(d) <= opt.slope_tol * (1.0 + slope_scale);
    };

    if (extend_left) {  // left
        double s0 = g.s_values().front();
        double sl = sc.limit_left();
        std::vector<double> ext;
        if (std::isinf(sl)) {
            double gap = std::max(span / 8.0, 1e-3);
            double prev_val = g(grid.front());
            for (int k = 0; k < opt.max_extension; ++k) {
                double u = s0 - gap;
                double x = sc.inverse(u);
                double v = g(x);
                ext.push_back(x);
                bool slope_done = settled(x, Side::Right);
                bool value_done = std::fabs(v - prev_val) <= opt.value_tol * (1.0 + std::fabs(v));
                if (slope_done && value_done) break;
                prev_val = v;
                gap *= 2.0;
            }
        } else if (s0 > sl) {
            // Stop well above the rounding-cancellation zone of the
            // one-sided derivatives; the remainder is summarised exactly by
            // the boundary extrapolation / carry atom.
            double gap = s0 - sl;
            double gap_min = 1e-3 * (s0 - sl);
            for (int k = 1; k <= 40; ++k) {
                gap *= 0.5;
                if (gap <= gap_min) break;
                ext.push_back(sc.inverse(sl + gap));
            }
        }
        grid.insert(grid.end(), ext.begin(), ext.end());
    }
    if (extend_right) {  // right
        double s1 = g.s_values().back();
        double sr = sc.limit_right();
        std::vector<double> ext;
        if (std::isinf(sr)) {
            double gap = std::max(span / 8.0, 1e-3);
            double prev_val = g(grid.back());
            for (int k = 0; k < opt.max_extension; ++k) {
                double u = s1 + gap;
                double x = sc.inverse(u);
                double v = g(x);
                ext.push_back(x);
                bool slope_done = settled(x, Side::Left);
                bool value_done = std::fabs(v - prev_val) <= opt.value_tol * (1.0 + std::fabs(v));
                if (slope_done && value_done) break;
                prev_val = v;
                gap *= 2.0;
            }
        } else if (sr > s1) {
            double gap = sr - s1;
            double gap_min = 1e-3 * (sr - s1);
            for (int k = 1; k <= 40; ++k) {
                gap *= 0.5;
                if (gap <= gap_min) break;
                ext.push_back(sc.inverse(sr - gap));
            }
        }
        grid.insert(grid.end(), ext.begin(), ext.end());
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) {
                               return std::fabs(a - b) <= 1e-13 * (1.0 + std::fabs(a));
                           }),
               grid.end());
    return grid;
}

}  // namespace detail

/*
 * Decompose a nonnegative s-convex grid function into
 *   alpha, kappa1 (s(x)-s(l)), kappa2 (s(r)-s(x)),
 *   mu1 on the nondecreasing side, mu2 on the nonincreasing side,
 * with the minimiser c* and the convention that a non-monotone g gets
 * kappa1 = kappa2 = 0, mu1((l,c*)) = mu2((c*,r)) = 0 and alpha = g(c*).
 *
 * Closed-form inputs are extended toward the endpoints until the boundary
 * contribution settles, so alpha and kappa refer to the true endpoint
 * limits.  Data-only grids are decomposed hull-relatively: mass the grid
 * cannot see is summarised by a carry atom placed where the linear
 * extension of g meets zero, which reproduces g exactly on its hull.
 */
inline ChoquetDecomposition choquet_decompose(const GridFunction& g, const DiffusionSpec& spec,
                                              const ChoquetOptions& opt = {}) {
    auto chk = check_subharmonic(g, opt.subharmonic_tol);
    if (!chk.ok) {
        const auto& v = *chk.first_violation;
        throw NotSubharmonic(
            std::string("choquet_decompose: ") +
            (v.kind == SubharmonicViolation::Kind::Negative ? "negative value"
                                                            : "convexity violation") +
            " near x = " + std::to_string(v.location));
    }

    const ScaleFunction& sc = g.scale();
    std::vector<double> grid = detail::extended_grid(g, opt);
    const bool data_grid = !g.has_closed_form();

    ChoquetDecomposition out;
    out.scale = sc;
    double s_left = sc.limit_left();
    double s_right = sc.limit_right();

    for (int round = 0; round <= opt.refine_rounds; ++round) {
        detail::NodeData nd = detail::evaluate_nodes(g, grid);
        std::size_t n = nd.size();

        double min_q = kInf, max_q = -kInf;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            double q = (nd.g[j + 1] - nd.g[j]) / (nd.s[j + 1] - nd.s[j]);
            min_q = std::min(min_q, q);
            max_q = std::max(max_q, q);
        }
        double mono_tol = opt.value_tol * (1.0 + std::fabs(min_q) + std::fabs(max_q));
        bool nondecr = min_q >= -mono_tol;
        bool nonincr = max_q <= mono_tol;

        std::size_t c_idx;
        if (nondecr)
            c_idx = 0;
        else if (nonincr)
            c_idx = n - 1;
        else {
            c_idx = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (nd.g[i] < nd.g[c_idx]) c_idx = i;
        }

        out = ChoquetDecomposition{};
        out.scale = sc;
        out.s_anchor_left = std::isfinite(s_left) ? s_left : nd.s.front();
        out.s_anchor_right = std::isfinite(s_right) ? s_right : nd.s.back();
        std::vector<double> refine;

        double entry_slope = 0.0;  // slope accounted left of the mu1 region
        std::optional<Atom> carry_left, carry_right;

        if (c_idx == 0) {
            // Purely nondecreasing: boundary behaviour at l feeds alpha,
            // kappa1 and possibly a carry atom.
            double d0 = std::max(nd.dplus.front(), 0.0);
            double g0 = nd.g.front();
            double s0 = nd.s.front();
            if (std::isfinite(s_left)) {
                double a = g0 - d0 * (s0 - s_left);
                if (a >= -opt.value_tol * (1.0 + std::fabs(g0))) {
                    out.alpha = std::max(a, 0.0);
                    out.kappa1 = d0;
                } else {
                    out.alpha = 0.0;
                    out.kappa1 = 0.0;
                    if (d0 > opt.mass_floor)
                        carry_left = Atom{sc.inverse(s0 - g0 / d0), d0};
                }
            } else {
                out.kappa1 = 0.0;
                if (d0 <= opt.slope_tol * (1.0 + std::fabs(d0))) {
                    out.alpha = g0;
                } else {
                    out.alpha = 0.0;
                    carry_left = Atom{sc.inverse(s0 - g0 / d0), d0};
                }
            }
            entry_slope = d0;
            out.cstar = spec.interval.left;
        } else {
            out.alpha = nd.g[c_idx];
            out.cstar = nd.x[c_idx];
            entry_slope = 0.0;
        }

        double exit_slope = 0.0;  // slope accounted right of the mu2 region
        if (c_idx == n - 1) {
            double dN = std::min(nd.dminus.back(), 0.0);
            double gN = nd.g.back();
            double sN = nd.s.back();
            if (std::isfinite(s_right)) {
                double a = gN + dN * (s_right - sN);
                if (a >= -opt.value_tol * (1.0 + std::fabs(gN))) {
                    out.alpha = std::max(a, 0.0);
                    out.kappa2 = -dN;
                } else {
                    out.alpha = 0.0;
                    out.kappa2 = 0.0;
                    if (-dN > opt.mass_floor)
                        carry_right = Atom{sc.inverse(sN - gN / dN), -dN};
                }
            } else {
                out.kappa2 = 0.0;
                if (-dN <= opt.slope_tol * (1.0 + std::fabs(dN))) {
                    out.alpha = gN;
                } else {
                    out.alpha = 0.0;
                    carry_right = Atom{sc.inverse(sN - gN / dN), -dN};
                }
            }
            exit_slope = dN;
            out.cstar = spec.interval.right;
            if (nondecr) out.cstar = spec.interval.left;
        }

        // mu1 over [c*, r): entry slope kappa1 / carry; exit is the raw
        // final slope (mass above the hull never matters on it).
        if (c_idx < n - 1) {
            out.mu1 = detail::extract_measure(nd, c_idx, n - 1, entry_slope, nd.dplus[n - 1],
                                              data_grid, opt, sc, &refine);
        }
        if (carry_left) {
            out.mu1.atoms.insert(out.mu1.atoms.begin(), *carry_left);
            out.mu1.atom_s.insert(out.mu1.atom_s.begin(), sc(carry_left->location));
        }
        // mu2 over (l, c*]: entry slope is the raw initial slope; exit is
        // -kappa2 (or the carry) so the jump at c* is -d-(c*).
        if (c_idx > 0) {
            out.mu2 = detail::extract_measure(nd, 0, c_idx, nd.dminus[0],
                                              c_idx == n - 1 ? exit_slope : 0.0, data_grid, opt,
                                              sc, &refine);
        }
        if (carry_right) {
            out.mu2.atoms.push_back(*carry_right);
            out.mu2.atom_s.push_back(sc(carry_right->location));
        }

        if (refine.empty() || round == opt.refine_rounds) break;
        grid.insert(grid.end(), refine.begin(), refine.end());
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end(),
                               [](double a, double b) {
                                   return std::fabs(a - b) <= 1e-13 * (1.0 + std::fabs(a));
                               }),
                   grid.end());
    }
    return out;
}

/// Evaluate the decomposition at x.
inline double choquet_reconstruct(const ChoquetDecomposition& d, const DiffusionSpec& spec,
                                  double x) {
    (void)spec;
    double sx = d.scale(x);
    double v = d.alpha;
    if (d.kappa1 > 0.0) v += d.kappa1 * (sx - d.s_anchor_left);
    if (d.kappa2 > 0.0) v += d.kappa2 * (d.s_anchor_right - sx);
    v += d.mu1.kernel_plus(sx);
    v += d.mu2.kernel_minus(sx);
    if (!std::isfinite(v)) throw NonIntegrable("choquet_reconstruct: non-finite value");
    return v;
}

/// Revuz measure mu1 + mu2 of the compensator of g(X).
inline RadonMeasure compensator_measure(const ChoquetDecomposition& d,
                                        const DiffusionSpec& spec) {
    auto m1 = d.mu1.to_radon(d.scale, spec.interval);
    auto m2 = d.mu2.to_radon(d.scale, spec.interval);
    return m1.plus(m2);
}

}  // namespace dpot
