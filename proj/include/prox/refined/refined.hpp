// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "prox/core/error.hpp"
#include "prox/core/numeric.hpp"
#include "prox/eigen1d/solve.hpp"
#include "prox/transmission/transmission.hpp"

/// The curvature-perturbed interface family on (-h^{delta-1/2}, h^{delta-1/2}) with
/// weight w = 1 - beta h^{1/2} t:
///     int rho w [|u'|^2 + (1 + 2 eps t)(t - xi - eps t^2/2)^2 |u|^2] + w V |u|^2,   eps = beta h^{1/2},
/// rho = 1, V = -alpha for t > 0 and rho = 1/m, V = a alpha for t < 0.
namespace prox::refined {

struct RefinedParams {
    /// a, m and the spectral parameter; base.xi is ignored.
    transmission::TransmissionParams base;
    double h = 1e-2;
    double beta = 0.0;
    double delta = 5.0 / 12.0;

    double half_width() const { return std::pow(h, delta - 0.5); }
    double eps() const { return beta * std::sqrt(h); }

    void validate() const
    {
        transmission::TransmissionParams b = base;
        b.xi = 0.0;
        b.validate();
        if (!(h > 0.0) || !std::isfinite(h)) throw PreconditionError("refined: h must be > 0");
        if (!std::isfinite(beta)) throw PreconditionError("refined: beta must be finite");
        if (!(delta > 0.25 && delta < 0.5)) throw PreconditionError("refined: delta must lie in (1/4, 1/2)");
        if (!(beta * std::pow(h, delta) < 1.0)) throw PreconditionError("refined: need beta h^delta < 1");
        if (!(1.0 - std::abs(eps()) * half_width() > 0.0)) {
            throw PreconditionError("refined: weight 1 - beta h^{1/2} t vanishes on the interval");
        }
    }
};

struct Options {
    eigen1d::Resolution res{1.0 / 192.0, true, 1e-14, eigen1d::MassKind::lumped, 1e-9};
};

inline eigen1d::FunctionForm form(const RefinedParams& p, double xi)
{
    const double e = p.eps();
    const double a = p.base.a, m = p.base.m, al = p.base.alpha;
    eigen1d::FunctionForm f;
    f.w = [e](double t) { return 1.0 - e * t; };
    f.p = [e, m](double t) { return (t < 0.0 ? 1.0 / m : 1.0) * (1.0 - e * t); };
    f.q = [e, m, a, al, xi](double t) {
        const double s = t - xi - 0.5 * e * t * t;
        const double rho = t < 0.0 ? 1.0 / m : 1.0;
        const double v = t < 0.0 ? a * al : -al;
        return (1.0 - e * t) * (rho * (1.0 + 2.0 * e * t) * s * s + v);
    };
    f.left = eigen1d::Boundary::dirichlet();
    f.right = eigen1d::Boundary::dirichlet();
    f.points = 5;
    f.jump = true;
    return f;
}

inline eigen1d::Grid grid(const RefinedParams& p, const Options& opt = {})
{
    const double l = p.half_width();
    const auto n = static_cast<std::size_t>(std::ceil(l / opt.res.h));
    return eigen1d::Grid::split(-l, l, n, n);
}

/// Ground energy of the refined operator at xi (Dirichlet at both ends of the fixed interval).
inline double mu1_refined(const RefinedParams& p, double xi, const Options& opt = {})
{
    p.validate();
    if (!std::isfinite(xi)) throw PreconditionError("mu1_refined: xi must be finite");
    return eigen1d::ground_state(form(p, xi), grid(p, opt), opt.res, false).energy;
}

struct ExpansionRow {
    double h = 0.0;
    double mu1_computed = 0.0;
    /// d0 + beta C^_1 h^{1/2} and d0 + beta C~_1 h^{1/2} are the two candidate predictions;
    /// the residuals are |mu1_computed - prediction| / h^{1/2}.
    double scaled_residual_hat = 0.0;
    double scaled_residual_tilde = 0.0;
};

struct ExpansionCheck {
    double alpha_hat = 0.0;
    double eta_hat = 0.0;
    double d0 = 0.0;
    /// (1/2) mu_1'' at eta_hat from the closed form, and from a central second difference.
    double d2 = 0.0;
    double d2_fd = 0.0;
    double d3_hat = 0.0;
    double d3_tilde = 0.0;
    double c_hat1 = 0.0;
    double c_tilde1 = 0.0;
    std::vector<ExpansionRow> rows;
    /// Fitted exponents p in |mu1_computed - prediction| ~ h^p (needs two or more rows).
    double exponent_hat = 0.0;
    double exponent_tilde = 0.0;
    /// Which trace-term sign gives residual / h^{1/2} decreasing along the sweep:
    /// "+" for C^_1, "-" for C~_1; empty when both or neither do.
    std::string winner;
};

/// Compares mu_1 of the refined operator at xi = eta_hat with d0 + d3 h^{1/2} for both candidate
/// trace-term signs, along decreasing h.
inline ExpansionCheck expansion_check(double a, double m, double alpha_hat, double beta, const std::vector<double>& h_list,
                                      double delta = 5.0 / 12.0, const Options& opt = {},
                                      const transmission::Options& topt = {}, double eta_guess = 1.0,
                                      double fd_step = 1e-3)
{
    if (!(m > 1.0)) throw PreconditionError("expansion_check: m must be > 1");
    if (h_list.empty()) throw PreconditionError("expansion_check: empty h list");
    for (std::size_t i = 1; i < h_list.size(); ++i) {
        if (!(h_list[i] < h_list[i - 1])) throw PreconditionError("expansion_check: h must decrease");
    }
    ExpansionCheck c;
    c.alpha_hat = alpha_hat;
    const auto mn = transmission::local_minimum(a, m, alpha_hat, eta_guess, topt);
    c.eta_hat = mn.xi_star;
    c.d0 = mn.mu_star;
    c.d2 = 0.5 * mn.second_derivative;
    const auto mu = [&](double xi) { return transmission::ground_energy({a, m, alpha_hat, xi}, topt); };
    c.d2_fd = 0.5 * (mu(c.eta_hat + fd_step) - 2.0 * c.d0 + mu(c.eta_hat - fd_step)) / (fd_step * fd_step);
    const auto coeffs = transmission::model_coefficients_at(a, m, alpha_hat, c.eta_hat, topt);
    c.c_hat1 = coeffs.c_hat1;
    c.c_tilde1 = coeffs.c_tilde1;
    c.d3_hat = beta * c.c_hat1;
    c.d3_tilde = beta * c.c_tilde1;

    for (double h : h_list) {
        RefinedParams p{{a, m, alpha_hat, 0.0}, h, beta, delta};
        ExpansionRow r;
        r.h = h;
        r.mu1_computed = mu1_refined(p, c.eta_hat, opt);
        const double sh = std::sqrt(h);
        r.scaled_residual_hat = std::abs(r.mu1_computed - c.d0 - c.d3_hat * sh) / sh;
        r.scaled_residual_tilde = std::abs(r.mu1_computed - c.d0 - c.d3_tilde * sh) / sh;
        c.rows.push_back(r);
    }
    bool hat_dec = c.rows.size() > 1, tilde_dec = c.rows.size() > 1;
    for (std::size_t i = 1; i < c.rows.size(); ++i) {
        hat_dec = hat_dec && c.rows[i].scaled_residual_hat < c.rows[i - 1].scaled_residual_hat;
        tilde_dec = tilde_dec && c.rows[i].scaled_residual_tilde < c.rows[i - 1].scaled_residual_tilde;
    }
    if (hat_dec != tilde_dec) c.winner = hat_dec ? "+" : "-";
    if (c.rows.size() > 1) {
        std::vector<double> lh, lr_hat, lr_tilde;
        for (const auto& r : c.rows) {
            const double sh = std::sqrt(r.h);
            lh.push_back(std::log(r.h));
            lr_hat.push_back(std::log(std::max(r.scaled_residual_hat * sh, 1e-300)));
            lr_tilde.push_back(std::log(std::max(r.scaled_residual_tilde * sh, 1e-300)));
        }
        c.exponent_hat = numeric::fit_line(lh, lr_hat).second;
        c.exponent_tilde = numeric::fit_line(lh, lr_tilde).second;
    }
    return c;
}

} // namespace prox::refined
