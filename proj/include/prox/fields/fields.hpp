// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "prox/core/error.hpp"
#include "prox/core/numeric.hpp"
#include "prox/halfline/halfline.hpp"
#include "prox/transmission/transmission.hpp"

/// Critical-field layer: alpha(a, m), the effective de Gennes parameter and the H_C3 formulas.
namespace prox::fields {

enum class Branch { unit, interior };

inline const char* to_string(Branch b) { return b == Branch::unit ? "unit" : "interior"; }

struct AlphaResult {
    double a = 0.0;
    double m = 0.0;
    double alpha = 1.0;
    Branch branch = Branch::unit;
    /// |inf_xi mu_1(a, m, alpha; xi)| at the returned root.
    double residual = 0.0;
    /// Minimizers over xi at the root (empty on the unit branch).
    transmission::MinimizerSet minimizers;
    int evaluations = 0;
    /// False when the dip of mu_1 below 1 - alpha at alpha = 1 is under the scan
    /// resolution; alpha is then 1 to working precision.
    bool resolved = true;
};

struct Settings {
    transmission::Options interface{};
    halfline::Options halfline{};
};

namespace detail {

inline double global_min(const transmission::MinimizerSet& s)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& mn : s.minima) best = std::min(best, mn.mu_star);
    return best;
}

inline const transmission::Minimum& global_minimizer(const transmission::MinimizerSet& s)
{
    if (s.minima.empty()) throw AnomalyError("no minimizer over xi");
    return *std::min_element(s.minima.begin(), s.minima.end(),
                             [](const auto& x, const auto& y) { return x.mu_star < y.mu_star; });
}

} // namespace detail

/// The unique alpha with inf_xi mu_1(a, m, alpha; xi) = 0.
///
/// m <= 1 gives 1 exactly. For m > 1 the root is bracketed by [Theta_0, 1];
/// interior steps re-minimize from the previous minimizers, and the root is
/// confirmed by a full scan over xi.
inline AlphaResult alpha_of(double a, double m, double tol = 1e-10, const Settings& s = {})
{
    if (!(a > 0.0) || !(m > 0.0)) throw PreconditionError("alpha_of: a and m must be > 0");
    if (!(tol > 0.0)) throw PreconditionError("alpha_of: tol must be > 0");
    AlphaResult r;
    r.a = a;
    r.m = m;
    if (m <= 1.0) return r;

    r.branch = Branch::interior;
    const double theta0 = halfline::theta_of(0.0, s.halfline).theta;
    const auto full = [&](double al) {
        ++r.evaluations;
        return transmission::minimize_over_xi(a, m, al, s.interface);
    };
    // near m = 1 the dip below the plateau 1 - alpha can be unresolvable; the plateau then bounds inf mu_1
    std::optional<transmission::MinimizerSet> lo_set;
    try {
        lo_set = full(theta0);
    } catch (const AnomalyError&) {
        lo_set.reset();
    }
    const double glo = lo_set ? detail::global_min(*lo_set) : std::min(1.0 - theta0, 1.0 / m + a * theta0);
    if (!(glo > 0.0)) throw BracketError("alpha_of: inf mu_1 at Theta_0 is not positive (" + std::to_string(glo) + ")");
    std::optional<transmission::MinimizerSet> hi_set;
    try {
        hi_set = full(1.0);
    } catch (const AnomalyError&) {
        hi_set.reset();
    }
    if (!hi_set || !(detail::global_min(*hi_set) < -s.interface.plateau_tol)) {
        r.alpha = 1.0;
        r.resolved = false;
        r.residual = hi_set ? std::abs(detail::global_min(*hi_set)) : 0.0;
        if (hi_set) r.minimizers = *hi_set;
        return r;
    }

    std::vector<double> seeds;
    if (lo_set) {
        for (const auto& mn : lo_set->minima) seeds.push_back(mn.xi_star);
    }
    for (const auto& mn : hi_set->minima) seeds.push_back(mn.xi_star);
    const auto warm = [&](double al) {
        ++r.evaluations;
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> next;
        for (double seed : seeds) {
            const auto mn = transmission::local_minimum(a, m, al, seed, s.interface);
            next.push_back(mn.xi_star);
            best = std::min(best, mn.mu_star);
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end(), [](double x, double y) { return std::abs(x - y) < 1e-6; }),
                   next.end());
        seeds = next;
        return best;
    };

    double lo = theta0, hi = 1.0;
    for (int pass = 0; pass < 3; ++pass) {
        r.alpha = numeric::brent_root(warm, lo, hi, tol).x;
        r.minimizers = full(r.alpha);
        const double g = detail::global_min(r.minimizers);
        r.residual = std::abs(g);
        if (r.residual <= 10.0 * tol) break;
        // the full scan found a lower branch than the warm-started one
        (g > 0.0 ? lo : hi) = r.alpha;
        seeds.clear();
        for (const auto& mn : r.minimizers.minima) seeds.push_back(mn.xi_star);
        if (pass == 2) throw ConvergenceError("alpha_of: root residual above 10 tol");
    }
    if (!(theta0 < r.alpha && r.alpha < 1.0)) throw AnomalyError("alpha_of: root outside (Theta_0, 1)");
    return r;
}

/// alpha(a, m) along increasing m; throws when the sequence fails to decrease.
inline std::vector<AlphaResult> alpha_monotonicity_sweep(double a, const std::vector<double>& m_list,
                                                         double tol = 1e-10, const Settings& s = {})
{
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        if (!(m_list[i] > 1.0)) throw PreconditionError("alpha_monotonicity_sweep: every m must be > 1");
        if (i > 0 && !(m_list[i] > m_list[i - 1])) throw PreconditionError("alpha_monotonicity_sweep: m must increase");
    }
    std::vector<AlphaResult> out;
    for (double m : m_list) {
        out.push_back(alpha_of(a, m, tol, s));
        const bool resolved = out.back().resolved && (out.size() < 2 || out[out.size() - 2].resolved);
        if (resolved && out.size() > 1 && !(out.back().alpha < out[out.size() - 2].alpha)) {
            throw AnomalyError("alpha_monotonicity_sweep: alpha does not decrease at m = " + std::to_string(m));
        }
    }
    return out;
}

/// Smallest sampled m whose root has exactly one minimizer with positive curvature.
inline std::optional<double> estimate_m0(const std::vector<AlphaResult>& sweep)
{
    for (const auto& r : sweep) {
        if (r.branch != Branch::interior) continue;
        const auto& mins = r.minimizers.minima;
        if (mins.size() == 1 && mins.front().second_derivative > 0.0) return r.m;
    }
    return std::nullopt;
}

struct EffectiveGamma {
    double gamma_am = 0.0;
    double gamma0 = 0.0;
    double ell = 0.0;
    /// Theta(gamma0 * ell) - ell^2.
    double residual = 0.0;
};

/// gamma(a, m) with Theta(gamma(a, m)) = alpha(a, m), and gamma0 = gamma / sqrt(alpha), ell = sqrt(alpha).
inline EffectiveGamma effective_gamma(double alpha, const halfline::Options& hopt = {},
                                      halfline::ThetaMemo* memo = nullptr)
{
    const double theta0 = halfline::theta_of(0.0, hopt, memo).theta;
    if (!(alpha > theta0 && alpha < 1.0)) throw PreconditionError("effective_gamma: alpha must lie in (Theta_0, 1)");
    EffectiveGamma e;
    e.gamma_am = halfline::theta_inverse(alpha, hopt, memo);
    e.ell = std::sqrt(alpha);
    e.gamma0 = e.gamma_am / e.ell;
    e.residual = halfline::theta_of(e.gamma0 * e.ell, hopt, memo).theta - e.ell * e.ell;
    return e;
}

inline EffectiveGamma effective_gamma(double a, double m, double tol = 1e-10, const Settings& s = {})
{
    if (!(m > 1.0)) throw PreconditionError("effective_gamma: m must be > 1");
    return effective_gamma(alpha_of(a, m, tol, s).alpha, s.halfline);
}

struct Coefficients {
    transmission::ModelCoefficients model;
    /// -C~_1 / b_1.
    double curvature_coeff = 0.0;
    double alpha = 0.0;
    double eta = 0.0;
};

/// b_1, C~_1, C^_1 and the curvature coefficient at alpha = alpha(a, m), from its global minimizer.
inline Coefficients model_coefficients(const AlphaResult& root, const Settings& s = {})
{
    if (root.branch != Branch::interior) throw PreconditionError("model_coefficients: m must be > 1");
    const auto& mn = detail::global_minimizer(root.minimizers);
    Coefficients c;
    c.alpha = root.alpha;
    c.eta = mn.xi_star;
    c.model = transmission::model_coefficients_at(root.a, root.m, root.alpha, c.eta, s.interface);
    c.curvature_coeff = -c.model.c_tilde1 / c.model.b1;
    return c;
}

inline Coefficients model_coefficients(double a, double m, double tol = 1e-10, const Settings& s = {})
{
    return model_coefficients(alpha_of(a, m, tol, s), s);
}

struct Drift {
    std::vector<double> m;
    std::vector<double> xi_star;
    /// (xi_star - xi_0) sqrt(m).
    std::vector<double> scaled;
    /// Intercept of scaled against 1/sqrt(m).
    double fitted_limit = 0.0;
    double xi0 = 0.0;
};

/// Minimizer drift (xi*(a, m) - xi_0) sqrt(m) at alpha = alpha(a, m).
inline Drift minimizer_drift_check(double a, const std::vector<double>& m_list, double tol = 1e-10,
                                   const Settings& s = {})
{
    if (m_list.size() < 2) throw PreconditionError("minimizer_drift_check: need at least two values of m");
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        if (!(m_list[i] > 1.0)) throw PreconditionError("minimizer_drift_check: every m must be > 1");
        if (i > 0 && !(m_list[i] > m_list[i - 1])) throw PreconditionError("minimizer_drift_check: m must increase");
    }
    Drift d;
    d.xi0 = halfline::theta_of(0.0, s.halfline).xi_star;
    std::vector<double> x;
    for (double m : m_list) {
        const auto root = alpha_of(a, m, tol, s);
        if (root.minimizers.minima.size() != 1) {
            throw AnomalyError("minimizer_drift_check: " + std::to_string(root.minimizers.minima.size()) +
                               " minimizers at m = " + std::to_string(m));
        }
        const double xs = root.minimizers.minima.front().xi_star;
        d.m.push_back(m);
        d.xi_star.push_back(xs);
        d.scaled.push_back((xs - d.xi0) * std::sqrt(m));
        x.push_back(1.0 / std::sqrt(m));
    }
    d.fitted_limit = numeric::fit_line(x, d.scaled).first;
    return d;
}

/// b = sqrt(a) 3C_1 (1 - 3C_1) / (2 (2 - 3C_1)).
inline double drift_constant(double a, double c1)
{
    const double k = 3.0 * c1;
    return std::sqrt(a) * k * (1.0 - k) / (2.0 * (2.0 - k));
}

struct CriticalFieldReport {
    double kappa = 0.0;
    double alpha = 0.0;
    double hc3_leading = 0.0;
    std::optional<double> hc3_two_term;
    double coeff_c1 = 0.0;
    std::optional<double> kappa_r_max;
    std::string regime;
};

/// kappa / alpha(a, m).
inline CriticalFieldReport hc3_leading(const AlphaResult& root, double kappa)
{
    if (!(kappa > 0.0)) throw PreconditionError("hc3_leading: kappa must be > 0");
    CriticalFieldReport r;
    r.kappa = kappa;
    r.alpha = root.alpha;
    r.hc3_leading = kappa / root.alpha;
    r.regime = std::string("leading order, ") + to_string(root.branch) + " branch";
    return r;
}

inline CriticalFieldReport hc3_leading(double a, double m, double kappa, const Settings& s = {})
{
    return hc3_leading(alpha_of(a, m, 1e-10, s), kappa);
}

/// kappa / alpha + C_1(a, m) / alpha^{3/2} (kappa_r)_max.
///
/// Refused below the estimated m_0; throws when the coefficient is negative.
inline CriticalFieldReport hc3_two_term(const Coefficients& c, double m, double m0, double kappa, double kappa_r_max)
{
    if (!(kappa > 0.0)) throw PreconditionError("hc3_two_term: kappa must be > 0");
    if (!std::isfinite(kappa_r_max)) throw PreconditionError("hc3_two_term: kappa_r_max must be finite");
    if (m < m0) {
        throw RegimeError("hc3_two_term: m = " + std::to_string(m) + " is below the estimated m_0 = " +
                          std::to_string(m0) + "; the two-term formula is only established for m >= m_0");
    }
    if (!(c.curvature_coeff >= 0.0)) {
        throw AnomalyError("hc3_two_term: negative curvature coefficient " + std::to_string(c.curvature_coeff));
    }
    CriticalFieldReport r;
    r.kappa = kappa;
    r.alpha = c.alpha;
    r.hc3_leading = kappa / c.alpha;
    r.coeff_c1 = c.curvature_coeff;
    r.kappa_r_max = kappa_r_max;
    r.hc3_two_term = r.hc3_leading + c.curvature_coeff / std::pow(c.alpha, 1.5) * kappa_r_max;
    r.regime = "two-term, m >= m_0";
    return r;
}

/// Leading order of the upper critical field with boundary parameter kappa^delta gamma0:
/// kappa / Theta_0, kappa / Theta(gamma0 ell(gamma0)), kappa, or (gamma0 / eta0)^2 kappa^{2 delta - 1}.
/// `alpha` reports kappa / H_C3.
inline CriticalFieldReport hc3_degennes(double delta, double gamma0, double kappa, const halfline::Options& hopt = {},
                                        halfline::ThetaMemo* memo = nullptr)
{
    if (!(kappa > 0.0)) throw PreconditionError("hc3_degennes: kappa must be > 0");
    if (!(delta >= 0.0) || !std::isfinite(gamma0)) throw PreconditionError("hc3_degennes: need delta >= 0, finite gamma0");
    CriticalFieldReport r;
    r.kappa = kappa;
    if (delta < 1.0 || gamma0 == 0.0) {
        r.alpha = halfline::theta_of(0.0, hopt, memo).theta;
        r.hc3_leading = kappa / r.alpha;
        r.regime = "delta < 1 or gamma0 = 0";
    } else if (delta == 1.0) {
        const double ell = halfline::ell_of(gamma0, hopt, memo);
        r.alpha = halfline::theta_of(gamma0 * ell, hopt, memo).theta;
        r.hc3_leading = kappa / r.alpha;
        r.regime = "delta = 1";
    } else if (gamma0 > 0.0) {
        r.alpha = 1.0;
        r.hc3_leading = kappa;
        r.regime = "delta > 1, gamma0 > 0";
    } else {
        const double e0 = halfline::eta0(hopt, memo);
        r.hc3_leading = (gamma0 / e0) * (gamma0 / e0) * std::pow(kappa, 2.0 * delta - 1.0);
        r.alpha = kappa / r.hc3_leading;
        r.regime = "delta > 1, gamma0 < 0";
    }
    return r;
}

} // namespace prox::fields
