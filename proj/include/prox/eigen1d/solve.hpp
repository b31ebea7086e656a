// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "prox/core/error.hpp"
#include "prox/core/numeric.hpp"
#include "prox/eigen1d/assemble.hpp"
#include "prox/eigen1d/grid.hpp"
#include "prox/eigen1d/tridiagonal.hpp"

namespace prox::eigen1d {

/// Discretization settings shared by every higher-level solve.
struct Resolution {
    /// Cell size of the coarse level on the right of the origin.
    double h = 1.0 / 96.0;
    /// Solve on h and h/2 and extrapolate eigenvalues and functionals.
    bool richardson = true;
    /// Absolute bisection tolerance for eigenvalues.
    double eig_tol = 1e-13;
    MassKind mass = MassKind::lumped;
    /// Relative amplitude allowed near a truncation cut before the window grows.
    double tail_tol = 1e-9;
};

/// One-sided data of the eigenfunction at t = 0.
struct Traces {
    double f0 = 0.0;
    std::optional<double> fprime_plus;
    std::optional<double> fprime_minus;
};

/// f(0) and one-sided derivatives f'(0+-) by second-order 3-point stencils.
inline Traces boundary_traces(const EigenPair& pair, const Grid& grid)
{
    const auto z = grid.zero_index();
    if (!z) throw PreconditionError("boundary_traces: grid has no node at t = 0");
    const std::size_t i0 = *z;
    const auto& f = pair.vector;
    Traces tr;
    tr.f0 = f[i0];
    const std::size_t right_nodes = grid.right_cells();
    const std::size_t left_nodes = grid.left_cells();
    if (right_nodes > 0) {
        if (right_nodes < 3) throw PreconditionError("boundary_traces: fewer than 3 nodes right of 0");
        const double h = grid.h_right();
        tr.fprime_plus = (-3.0 * f[i0] + 4.0 * f[i0 + 1] - f[i0 + 2]) / (2.0 * h);
    }
    if (left_nodes > 0) {
        if (left_nodes < 3) throw PreconditionError("boundary_traces: fewer than 3 nodes left of 0");
        const double h = grid.h_left();
        tr.fprime_minus = (3.0 * f[i0] - 4.0 * f[i0 - 1] + f[i0 - 2]) / (2.0 * h);
    }
    return tr;
}

enum class Side { left, right, all };

/// Trapezoid rule for int g(t) |f(t)|^2 dt over one side of the origin (or all of the grid).
template <class G>
double weighted_integral(const EigenPair& pair, const Grid& grid, G&& g, Side side)
{
    const auto t = grid.nodes();
    const auto& f = pair.vector;
    const std::size_t o = grid.origin_index();
    std::size_t begin = 0, end = t.size() - 1;
    if (side == Side::left) end = o;
    if (side == Side::right) begin = o;
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double a = g(t[i]) * f[i] * f[i];
        const double b = g(t[i + 1]) * f[i + 1] * f[i + 1];
        s += 0.5 * (t[i + 1] - t[i]) * (a + b);
    }
    return s;
}

/// int g(t) |u_h(t)|^2 dt for the piecewise-linear interpolant u_h of the
/// vector, with a Gauss rule on each cell (exact for polynomial g of degree
/// <= 2 with 3 points, <= 6 with 5 points).
template <class G>
double interpolant_integral(const EigenPair& pair, const Grid& grid, G&& g, int points = 3)
{
    const auto rule = detail::gauss_rule(points);
    const auto t = grid.nodes();
    const auto& f = pair.vector;
    double s = 0.0;
    for (std::size_t c = 0; c + 1 < t.size(); ++c) {
        const double h = t[c + 1] - t[c];
        const double mid = 0.5 * (t[c] + t[c + 1]);
        double e = 0.0;
        for (int k = 0; k < rule.n; ++k) {
            const double x = rule.x[static_cast<std::size_t>(k)];
            const double u = 0.5 * (1.0 - x) * f[c] + 0.5 * (1.0 + x) * f[c + 1];
            e += rule.w[static_cast<std::size_t>(k)] * g(mid + 0.5 * h * x) * u * u;
        }
        s += 0.5 * h * e;
    }
    return s;
}

/// An eigenpair together with the grid it lives on.
struct Level {
    Grid grid;
    EigenPair pair;
};

/// Ground state from one or two levels (h and h/2).
///
/// `energy` and the functionals evaluated through `extrapolate()` are Richardson
/// extrapolated when both levels are present.
struct GroundState {
    double energy = 0.0;
    Level fine;
    std::optional<Level> coarse;
    Traces traces;

    template <class Fn>
    double extrapolate(Fn&& functional) const
    {
        const double f = functional(fine);
        if (!coarse) return f;
        return numeric::richardson(f, functional(*coarse));
    }

    template <class G>
    double integral(G&& g, Side side) const
    {
        return extrapolate([&](const Level& l) { return weighted_integral(l.pair, l.grid, g, side); });
    }

    /// Nodal samples on the fine level.
    const std::vector<double>& samples() const { return fine.pair.vector; }
    const Grid& grid() const { return fine.grid; }
};

namespace detail {

inline Traces extrapolated_traces(const Level& fine, const std::optional<Level>& coarse)
{
    const Traces tf = boundary_traces(fine.pair, fine.grid);
    if (!coarse) return tf;
    const Traces tc = boundary_traces(coarse->pair, coarse->grid);
    Traces t;
    t.f0 = numeric::richardson(tf.f0, tc.f0);
    if (tf.fprime_plus && tc.fprime_plus) t.fprime_plus = numeric::richardson(*tf.fprime_plus, *tc.fprime_plus);
    if (tf.fprime_minus && tc.fprime_minus) t.fprime_minus = numeric::richardson(*tf.fprime_minus, *tc.fprime_minus);
    return t;
}

/// Largest |f| among the outermost `frac` of nodes on one end, relative to max |f|.
inline double tail_ratio(const std::vector<double>& f, bool left_end, double frac = 0.04)
{
    double fmax = 0.0;
    for (double v : f) fmax = std::max(fmax, std::abs(v));
    if (fmax == 0.0) return 0.0;
    const std::size_t n = f.size();
    const std::size_t k = std::max<std::size_t>(3, static_cast<std::size_t>(frac * static_cast<double>(n)));
    double tail = 0.0;
    for (std::size_t i = 0; i < std::min(k, n); ++i) {
        tail = std::max(tail, std::abs(left_end ? f[i] : f[n - 1 - i]));
    }
    return tail / fmax;
}

} // namespace detail

/// k smallest eigenpairs of `form` on a single grid.
template <QuadraticForm F>
std::vector<EigenPair> solve_on(const F& form, const Grid& grid, std::size_t k, double tol,
                                MassKind mass = MassKind::lumped)
{
    const Pencil p = assemble(form, grid, mass);
    return smallest_eigs(p, k, tol, grid.size());
}

/// Ground state on `grid` (and its refinement when res.richardson is set).
///
/// When `grow_window` is set and the eigenfunction has not decayed at a
/// Dirichlet cut, that end is extended (keeping the spacing) and the solve is
/// repeated.
template <QuadraticForm F>
GroundState ground_state(const F& form, Grid grid, const Resolution& res, bool grow_window = true)
{
    std::vector<EigenPair> fine_pairs;
    Grid fine_grid = res.richardson ? grid.refined() : grid;
    for (int attempt = 0;; ++attempt) {
        fine_pairs = solve_on(form, fine_grid, 1, res.eig_tol, res.mass);
        if (!grow_window) break;
        const auto& f = fine_pairs.front().vector;
        const bool grow_left = form.left_boundary().is_dirichlet() && grid.left_cells() > 0 &&
                               detail::tail_ratio(f, true) > res.tail_tol;
        const bool grow_right = form.right_boundary().is_dirichlet() && grid.right_cells() > 0 &&
                                detail::tail_ratio(f, false) > res.tail_tol;
        if (!grow_left && !grow_right) break;
        if (attempt >= 8) throw ConvergenceError("ground_state: eigenfunction does not decay inside the window");
        grid = grid.extended(grow_left ? grid.left_cells() / 2 : 0, grow_right ? grid.right_cells() / 2 : 0);
        fine_grid = res.richardson ? grid.refined() : grid;
    }

    GroundState gs{0.0, Level{fine_grid, std::move(fine_pairs.front())}, std::nullopt, {}};
    if (res.richardson) {
        auto coarse_pairs = solve_on(form, grid, 1, res.eig_tol, res.mass);
        gs.coarse = Level{grid, std::move(coarse_pairs.front())};
        gs.energy = numeric::richardson(gs.fine.pair.value, gs.coarse->pair.value);
    } else {
        gs.energy = gs.fine.pair.value;
    }
    if (grid.zero_index()) gs.traces = detail::extrapolated_traces(gs.fine, gs.coarse);
    return gs;
}

/// j-th eigenvalue (1-based) with optional Richardson extrapolation.
template <QuadraticForm F>
double eigenvalue(const F& form, const Grid& grid, std::size_t j, const Resolution& res)
{
    if (j < 1) throw PreconditionError("eigenvalue: index must be >= 1");
    const Grid fine = res.richardson ? grid.refined() : grid;
    const double vf = solve_on(form, fine, j, res.eig_tol, res.mass)[j - 1].value;
    if (!res.richardson) return vf;
    const double vc = solve_on(form, grid, j, res.eig_tol, res.mass)[j - 1].value;
    return numeric::richardson(vf, vc);
}

struct ConvergeOptions {
    std::size_t max_cells = std::size_t{1} << 20;
    double eig_tol = 1e-14;
    MassKind mass = MassKind::lumped;
    /// Fraction of the current cell count added per side when enlarging the window.
    double growth = 0.5;
    int max_enlargements = 12;
};

struct Converged {
    /// Richardson-extrapolated eigenvalue on the final grid pair.
    double value = 0.0;
    /// Ground pair on the finest grid used.
    EigenPair pair;
    Grid grid;
    /// |difference| of the last two extrapolated values.
    double error_estimate = 0.0;
    int refinements = 0;
    int enlargements = 0;
    std::vector<double> history;
};

/// Ground eigenvalue to tolerance by h-refinement with O(h^2) Richardson
/// extrapolation, then by enlarging every Dirichlet cut (at the final spacing)
/// until the value moves by less than tol / 10.
template <QuadraticForm F>
Converged converge(const F& form, const Grid& base_grid, double tol, const ConvergeOptions& opt = {})
{
    if (!(tol > 0.0)) throw PreconditionError("converge: tol must be > 0");

    Converged out{0.0, {}, base_grid, 0.0, 0, 0, {}};
    Grid coarse = base_grid;
    double coarse_val = solve_on(form, coarse, 1, opt.eig_tol, opt.mass)[0].value;
    double prev_extra = 0.0;
    bool have_extra = false;
    while (true) {
        if (coarse.cells() * 2 > opt.max_cells) {
            throw ConvergenceError("converge: no convergence within " + std::to_string(opt.max_cells) + " cells");
        }
        Grid fine = coarse.refined();
        auto pairs = solve_on(form, fine, 1, opt.eig_tol, opt.mass);
        const double extra = numeric::richardson(pairs[0].value, coarse_val);
        out.history.push_back(extra);
        ++out.refinements;
        const bool done = have_extra && std::abs(extra - prev_extra) < tol;
        out.value = extra;
        out.error_estimate = have_extra ? std::abs(extra - prev_extra) : 0.0;
        out.pair = std::move(pairs[0]);
        out.grid = fine;
        if (done) break;
        prev_extra = extra;
        have_extra = true;
        coarse_val = out.pair.value;
        coarse = fine;
    }

    const bool can_left = form.left_boundary().is_dirichlet() && base_grid.left_cells() > 0;
    const bool can_right = form.right_boundary().is_dirichlet() && base_grid.right_cells() > 0;
    if (!can_left && !can_right) return out;
    if (opt.max_enlargements <= 0) return out;

    for (int e = 0; e < opt.max_enlargements; ++e) {
        const auto extra_l = can_left ? static_cast<std::size_t>(opt.growth * static_cast<double>(coarse.left_cells())) : 0;
        const auto extra_r = can_right ? static_cast<std::size_t>(opt.growth * static_cast<double>(coarse.right_cells())) : 0;
        coarse = coarse.extended(extra_l, extra_r);
        if (2 * coarse.cells() > opt.max_cells) {
            throw ConvergenceError("converge: truncation growth exceeds " + std::to_string(opt.max_cells) + " cells");
        }
        const Grid fine = coarse.refined();
        auto pairs = solve_on(form, fine, 1, opt.eig_tol, opt.mass);
        const double vc = solve_on(form, coarse, 1, opt.eig_tol, opt.mass)[0].value;
        const double extra = numeric::richardson(pairs[0].value, vc);
        const double change = std::abs(extra - out.value);
        out.history.push_back(extra);
        ++out.enlargements;
        out.value = extra;
        out.pair = std::move(pairs[0]);
        out.grid = fine;
        if (change < tol / 10.0) return out;
    }
    throw ConvergenceError("converge: eigenvalue still changes as the truncation grows");
}

} // namespace prox::eigen1d
