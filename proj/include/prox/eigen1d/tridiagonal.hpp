// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "prox/core/error.hpp"
#include "prox/eigen1d/assemble.hpp"

namespace prox::eigen1d {

/// Number of pencil eigenvalues strictly below `lambda`.
///
/// Counts negative pivots of the LDL^T factorization of K - lambda M
/// (Sylvester inertia; M is positive definite).
inline std::size_t sturm_count(const Pencil& p, double lambda)
{
    const std::size_t n = p.size();
    constexpr double tiny = std::numeric_limits<double>::min() * 1e4;
    std::size_t negatives = 0;
    double d = p.k_diag[0] - lambda * p.m_diag[0];
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++negatives;
    for (std::size_t i = 1; i < n; ++i) {
        const double b = p.k_off[i - 1] - lambda * p.m_off[i - 1];
        d = (p.k_diag[i] - lambda * p.m_diag[i]) - b * b / d;
        if (d == 0.0) d = -tiny;
        if (d < 0.0) ++negatives;
    }
    return negatives;
}

struct EigenPair {
    double value = 0.0;
    /// Values at every grid node (Dirichlet ends hold 0).
    std::vector<double> vector;
    /// 1 for the ground state.
    int index = 1;
};

namespace detail {

/// Solves (K - shift M) x = rhs in place via LDL^T without pivoting.
inline void shifted_solve(const Pencil& p, double shift, std::vector<double>& x)
{
    const std::size_t n = p.size();
    std::vector<double> d(n), l(n > 0 ? n - 1 : 0);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(p.k_diag[i]) + std::abs(shift * p.m_diag[i]));
    const double guard = std::max(scale, 1.0) * std::numeric_limits<double>::epsilon();
    auto safe = [guard](double v) { return std::abs(v) < guard ? (v < 0.0 ? -guard : guard) : v; };
    d[0] = safe(p.k_diag[0] - shift * p.m_diag[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const double b = p.k_off[i - 1] - shift * p.m_off[i - 1];
        l[i - 1] = b / d[i - 1];
        d[i] = safe((p.k_diag[i] - shift * p.m_diag[i]) - l[i - 1] * b);
    }
    for (std::size_t i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
    for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= l[i] * x[i + 1];
}

inline std::vector<double> mass_times(const Pencil& p, const std::vector<double>& x)
{
    const std::size_t n = p.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = p.m_diag[i] * x[i];
        if (i > 0) v += p.m_off[i - 1] * x[i - 1];
        if (i + 1 < n) v += p.m_off[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// x^T K x, in flux form when the pencil carries it.
inline double energy(const Pencil& p, const std::vector<double>& x)
{
    const std::size_t n = p.size();
    if (p.flux.empty()) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += p.k_diag[i] * x[i] * x[i];
            if (i + 1 < n) s += 2.0 * p.k_off[i] * x[i] * x[i + 1];
        }
        return s;
    }
    auto node = [&](std::size_t j) {
        return (j >= p.first_node && j - p.first_node < n) ? x[j - p.first_node] : 0.0;
    };
    double s = 0.0;
    for (std::size_t c = 0; c < p.flux.size(); ++c) {
        const double d = node(c + 1) - node(c);
        s += p.flux[c] * d * d;
    }
    for (std::size_t i = 0; i < n; ++i) {
        s += p.pot_diag[i] * x[i] * x[i];
        if (i + 1 < n) s += 2.0 * p.pot_off[i] * x[i] * x[i + 1];
    }
    return s;
}

} // namespace detail

/// Row sums of the mass matrix: trapezoid weights times the density.
inline std::vector<double> lumped_weights(const Pencil& p)
{
    std::vector<double> w(p.m_diag);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        w[i] += p.m_off[i];
        w[i + 1] += p.m_off[i];
    }
    return w;
}

/// The k algebraically smallest eigenpairs of K x = lambda M x.
///
/// Eigenvalues come from Sturm-sequence bisection to absolute tolerance `tol`
/// (floored at a few ulps); eigenvectors from inverse iteration. Vectors are
/// normalized in the lumped (trapezoid) inner product and scattered onto
/// `n_nodes` grid nodes; the entry of largest magnitude is made positive.
inline std::vector<EigenPair> smallest_eigs(const Pencil& p, std::size_t k, double tol, std::size_t n_nodes)
{
    const std::size_t n = p.size();
    if (k < 1) throw PreconditionError("smallest_eigs: k must be >= 1");
    if (k > n) throw PreconditionError("smallest_eigs: k exceeds the number of free nodes");
    if (!(tol > 0.0)) throw PreconditionError("smallest_eigs: tol must be > 0");
    for (double m : p.m_diag) {
        if (!(m > 0.0)) throw PreconditionError("smallest_eigs: mass diagonal must be positive");
    }

    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (sturm_count(p, lo) > 0) {
        lo = 2.0 * lo - 1.0;
        if (++guard > 1100 || !std::isfinite(lo)) throw BracketError("smallest_eigs: no lower bracket (indefinite mass?)");
    }
    guard = 0;
    while (sturm_count(p, hi) < k) {
        hi = 2.0 * hi + 1.0;
        if (++guard > 1100 || !std::isfinite(hi)) throw BracketError("smallest_eigs: no upper bracket");
    }

    std::vector<double> values(k);
    double floor_lo = lo;
    for (std::size_t j = 0; j < k; ++j) {
        double a = floor_lo, b = hi;
        while (true) {
            const double mid = 0.5 * (a + b);
            const double width_tol = std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)));
            if (b - a <= width_tol || mid <= a || mid >= b) break;
            if (sturm_count(p, mid) > j) b = mid; else a = mid;
        }
        values[j] = 0.5 * (a + b);
        floor_lo = a;
        if (sturm_count(p, b) <= j) throw BracketError("smallest_eigs: bisection lost its bracket");
    }

    std::vector<std::vector<double>> vecs;
    std::vector<EigenPair> out;
    out.reserve(k);
    const auto lw = lumped_weights(p);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = 1.0 + 0.25 * std::sin(0.37 * static_cast<double>(i) + 1.3 * static_cast<double>(j));
        }
        for (int it = 0; it < 3; ++it) {
            auto rhs = detail::mass_times(p, x);
            detail::shifted_solve(p, values[j], rhs);
            x = std::move(rhs);
            for (const auto& v : vecs) {
                const auto mv = detail::mass_times(p, v);
                const double c = detail::dot(x, mv);
                for (std::size_t i = 0; i < n; ++i) x[i] -= c * v[i];
            }
            const double nrm = std::sqrt(detail::dot(x, detail::mass_times(p, x)));
            if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ConvergenceError("smallest_eigs: inverse iteration broke down");
            for (double& v : x) v /= nrm;
        }
        vecs.push_back(x);

        EigenPair pair;
        // Rayleigh quotient (x is M-normalized); bisection alone is limited by
        // pivot roundoff of order eps * |K|
        const double rq = detail::energy(p, x);
        const double slack = std::max(1e3 * tol, 1e-6 * (1.0 + std::abs(values[j])));
        pair.value = std::abs(rq - values[j]) <= slack ? rq : values[j];
        pair.index = static_cast<int>(j + 1);
        double tn = 0.0;
        for (std::size_t i = 0; i < n; ++i) tn += lw[i] * x[i] * x[i];
        tn = std::sqrt(tn);
        std::size_t imax = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
        }
        const double sign = x[imax] < 0.0 ? -1.0 : 1.0;
        pair.vector.assign(n_nodes, 0.0);
        for (std::size_t i = 0; i < n; ++i) pair.vector[p.first_node + i] = sign * x[i] / tn;
        out.push_back(std::move(pair));
    }
    return out;
}

} // namespace prox::eigen1d
