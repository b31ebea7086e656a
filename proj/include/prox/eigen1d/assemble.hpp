// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "prox/core/error.hpp"
#include "prox/eigen1d/form.hpp"
#include "prox/eigen1d/grid.hpp"

namespace prox::eigen1d {

enum class MassKind { lumped, consistent };

/// Symmetric tridiagonal pencil (K, M) over the free nodes of a grid.
///
/// Degree of freedom i corresponds to grid node `first_node + i`; Dirichlet end
/// nodes are eliminated. `m_off` is all zeros for a lumped mass.
///
/// Assembled pencils also keep K split as sum_c flux[c] (u_{c+1} - u_c)^2 over
/// every grid cell plus the potential and boundary part (pot_diag, pot_off), so
/// the energy of a vector can be evaluated without cancellation.
struct Pencil {
    std::vector<double> k_diag;
    std::vector<double> k_off;
    std::vector<double> m_diag;
    std::vector<double> m_off;
    std::size_t first_node = 0;
    std::vector<double> flux;
    std::vector<double> pot_diag;
    std::vector<double> pot_off;

    std::size_t size() const { return k_diag.size(); }
    bool lumped() const
    {
        for (double v : m_off) {
            if (v != 0.0) return false;
        }
        return true;
    }
};

namespace detail {

struct GaussRule {
    std::array<double, 5> x{};
    std::array<double, 5> w{};
    int n = 0;
};

/// Gauss-Legendre rules on [-1, 1].
inline GaussRule gauss_rule(int points)
{
    GaussRule r;
    if (points <= 3) {
        const double a = std::sqrt(3.0 / 5.0);
        r.n = 3;
        r.x = {-a, 0.0, a, 0.0, 0.0};
        r.w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0, 0.0, 0.0};
    } else {
        const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
        const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
        r.n = 5;
        r.x = {-b, -a, 0.0, a, b};
        r.w = {wb, wa, 128.0 / 225.0, wa, wb};
    }
    return r;
}

} // namespace detail

/// Element integrals of the P1 discretization of a weighted quadratic form.
struct ElementMatrices {
    double k00 = 0, k01 = 0, k11 = 0;
    double m00 = 0, m01 = 0, m11 = 0;
    /// int p dt / h^2; the kinetic part of k is flux * [[1, -1], [-1, 1]].
    double flux = 0;
    /// Potential part of k.
    double q00 = 0, q01 = 0, q11 = 0;
};

/// Exact (for polynomial coefficients within the rule's degree) element integrals on [t0, t1].
template <QuadraticForm F>
ElementMatrices element_matrices(const F& form, double t0, double t1)
{
    const auto rule = detail::gauss_rule(form.quadrature_points());
    const double h = t1 - t0;
    const double mid = 0.5 * (t0 + t1);
    ElementMatrices e;
    double p_int = 0.0;
    for (int g = 0; g < rule.n; ++g) {
        const double t = mid + 0.5 * h * rule.x[static_cast<std::size_t>(g)];
        const double wq = 0.5 * h * rule.w[static_cast<std::size_t>(g)];
        const double phi1 = (t - t0) / h;
        const double phi0 = 1.0 - phi1;
        const double p = form.kinetic(t);
        if (!(p > 0.0)) {
            throw PreconditionError("assemble: kinetic weight p(t) must be > 0, got " + std::to_string(p) +
                                    " at t = " + std::to_string(t));
        }
        const double q = form.potential(t);
        const double w = form.density(t);
        if (!(w > 0.0)) {
            throw PreconditionError("assemble: density w(t) must be > 0 at t = " + std::to_string(t));
        }
        p_int += wq * p;
        e.q00 += wq * q * phi0 * phi0;
        e.q01 += wq * q * phi0 * phi1;
        e.q11 += wq * q * phi1 * phi1;
        e.m00 += wq * w * phi0 * phi0;
        e.m01 += wq * w * phi0 * phi1;
        e.m11 += wq * w * phi1 * phi1;
    }
    const double s = p_int / (h * h);
    e.flux = s;
    e.k00 = e.q00 + s;
    e.k11 = e.q11 + s;
    e.k01 = e.q01 - s;
    return e;
}

/// P1 finite-element assembly of `form` on `grid`.
///
/// Robin ends add gamma to the boundary diagonal; Dirichlet ends are removed.
/// The lumped mass is the row sum of the consistent one.
template <QuadraticForm F>
Pencil assemble(const F& form, const Grid& grid, MassKind mass = MassKind::lumped)
{
    const auto nodes = grid.nodes();
    const std::size_t n_nodes = nodes.size();
    if (form.jump_at_zero() && grid.t_min() < 0.0 && grid.t_max() > 0.0 && !grid.zero_index()) {
        throw PreconditionError("assemble: coefficient jump at t = 0 is not aligned with a grid node");
    }

    std::vector<double> kd(n_nodes, 0.0), ko(n_nodes - 1, 0.0);
    std::vector<double> md(n_nodes, 0.0), mo(n_nodes - 1, 0.0);
    std::vector<double> flux(n_nodes - 1, 0.0), qd(n_nodes, 0.0), qo(n_nodes - 1, 0.0);
    for (std::size_t c = 0; c + 1 < n_nodes; ++c) {
        const auto e = element_matrices(form, nodes[c], nodes[c + 1]);
        kd[c] += e.k00;
        kd[c + 1] += e.k11;
        ko[c] += e.k01;
        flux[c] = e.flux;
        qd[c] += e.q00;
        qd[c + 1] += e.q11;
        qo[c] += e.q01;
        md[c] += e.m00;
        md[c + 1] += e.m11;
        mo[c] += e.m01;
    }
    if (mass == MassKind::lumped) {
        for (std::size_t c = 0; c + 1 < n_nodes; ++c) {
            md[c] += mo[c];
            md[c + 1] += mo[c];
            mo[c] = 0.0;
        }
    }

    const Boundary lb = form.left_boundary();
    const Boundary rb = form.right_boundary();
    if (!lb.is_dirichlet()) {
        kd.front() += lb.gamma;
        qd.front() += lb.gamma;
    }
    if (!rb.is_dirichlet()) {
        kd.back() += rb.gamma;
        qd.back() += rb.gamma;
    }

    const std::size_t first = lb.is_dirichlet() ? 1 : 0;
    const std::size_t last = rb.is_dirichlet() ? n_nodes - 2 : n_nodes - 1;
    if (last < first || last >= n_nodes) throw PreconditionError("assemble: no free nodes");

    Pencil p;
    p.first_node = first;
    p.k_diag.assign(kd.begin() + static_cast<std::ptrdiff_t>(first), kd.begin() + static_cast<std::ptrdiff_t>(last + 1));
    p.m_diag.assign(md.begin() + static_cast<std::ptrdiff_t>(first), md.begin() + static_cast<std::ptrdiff_t>(last + 1));
    p.k_off.assign(ko.begin() + static_cast<std::ptrdiff_t>(first), ko.begin() + static_cast<std::ptrdiff_t>(last));
    p.m_off.assign(mo.begin() + static_cast<std::ptrdiff_t>(first), mo.begin() + static_cast<std::ptrdiff_t>(last));
    p.flux = std::move(flux);
    p.pot_diag.assign(qd.begin() + static_cast<std::ptrdiff_t>(first), qd.begin() + static_cast<std::ptrdiff_t>(last + 1));
    p.pot_off.assign(qo.begin() + static_cast<std::ptrdiff_t>(first), qo.begin() + static_cast<std::ptrdiff_t>(last));
    return p;
}

} // namespace prox::eigen1d
