// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "prox/core/error.hpp"
#include "prox/core/numeric.hpp"
#include "prox/eigen1d/solve.hpp"
#include "prox/halfline/halfline.hpp"

/// The interface family
///     Q(u) = int_{t>0} |u'|^2 + ((t - xi)^2 - alpha)|u|^2
///          + int_{t<0} (1/m)|u'|^2 + ((t - xi)^2 / m + a alpha)|u|^2
/// on L^2(R), and its ground energy mu_1(a, m, alpha; xi).
namespace prox::transmission {

struct TransmissionParams {
    double a = 1.0;
    double m = 1.0;
    double alpha = 0.0;
    double xi = 0.0;

    void validate() const
    {
        if (!(a > 0.0) || !std::isfinite(a)) throw PreconditionError("transmission: a must be > 0");
        if (!(m > 0.0) || !std::isfinite(m)) throw PreconditionError("transmission: m must be > 0");
        if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw PreconditionError("transmission: alpha must be >= 0");
        if (!std::isfinite(xi)) throw PreconditionError("transmission: xi must be finite");
    }
};

struct Options {
    eigen1d::Resolution res{1.0 / 96.0, true, 1e-14, eigen1d::MassKind::lumped, 1e-9};
    /// Right cut at max(xi, 0) + right_window.
    double right_window = 10.0;
    /// Left cut at max(-xi, 0) + left_window / s, with s the left decay scale factor.
    double left_window = 10.0;
    /// Samples of the coarse scan over the bracket |xi| <= d.
    int scan_points = 400;
    /// Tolerance on minimizer locations.
    double xi_tol = 1e-10;
    /// A scan sample counts as a local minimum only when it lies this far below a neighbour.
    double plateau_tol = 1e-10;
};

struct InterfaceGroundState {
    TransmissionParams params;
    double mu1 = 0.0;
    eigen1d::GroundState state;
    double f0 = 0.0;
    double fprime_plus = 0.0;
    double fprime_minus = 0.0;
    /// f'(0+) / f(0).
    double gamma_eff = 0.0;
    /// f'(0-) / (m f(0)); equals gamma_eff for the exact eigenfunction.
    double gamma_alt = 0.0;
    /// |f'(0+) - f'(0-)/m| / |f'(0-)|.
    double trace_residual = 0.0;
};

namespace detail {

/// Left decay scale: the left equation reads u'' = ((t - xi)^2 + m (a alpha - mu)) u.
inline double left_scale(const TransmissionParams& p)
{
    if (p.xi < 0.0) return 1.0;
    return std::max(1.0, std::sqrt(p.m * p.a * p.alpha) / 3.0);
}

} // namespace detail

inline eigen1d::PiecewiseHarmonicForm form(const TransmissionParams& p)
{
    eigen1d::PiecewiseHarmonicForm f;
    f.center = p.xi;
    f.kin_left = 1.0 / p.m;
    f.pot_left = 1.0 / p.m;
    f.shift_left = p.a * p.alpha;
    f.kin_right = 1.0;
    f.pot_right = 1.0;
    f.shift_right = -p.alpha;
    f.left = eigen1d::Boundary::dirichlet();
    f.right = eigen1d::Boundary::dirichlet();
    return f;
}

/// Truncated grid with a node at 0 and a finer spacing on the left when the left decay is fast.
inline eigen1d::Grid grid(const TransmissionParams& p, const Options& opt)
{
    const double s = detail::left_scale(p);
    const double h = opt.res.h;
    const double t_max = std::max(p.xi, 0.0) + opt.right_window;
    const double t_min = -(std::max(-p.xi, 0.0) + opt.left_window / s);
    const auto right = static_cast<std::size_t>(std::ceil(t_max / h));
    const auto left = static_cast<std::size_t>(std::ceil(-t_min * s / h));
    return eigen1d::Grid::split(-static_cast<double>(left) * h / s, static_cast<double>(right) * h, left, right);
}

/// Ground energy, state and interface traces.
inline InterfaceGroundState mu1(const TransmissionParams& p, const Options& opt = {})
{
    p.validate();
    InterfaceGroundState g{p, 0.0, eigen1d::ground_state(form(p), grid(p, opt), opt.res), 0, 0, 0, 0, 0, 0};
    g.mu1 = g.state.energy;
    g.f0 = g.state.traces.f0;
    g.fprime_plus = g.state.traces.fprime_plus.value_or(0.0);
    g.fprime_minus = g.state.traces.fprime_minus.value_or(0.0);
    if (!(g.f0 > 0.0)) throw AnomalyError("mu1: ground state trace f(0) is not positive");
    g.gamma_eff = g.fprime_plus / g.f0;
    g.gamma_alt = g.fprime_minus / (p.m * g.f0);
    const double den = std::max(std::abs(g.fprime_minus), std::numeric_limits<double>::min());
    g.trace_residual = std::abs(g.fprime_plus - g.fprime_minus / p.m) / den;
    return g;
}

/// Ground energy alone. Unlike mu1 it tolerates the near-degenerate crossing of a
/// left-localized and a right-localized state, where the computed vector is not sign-definite.
inline double ground_energy(const TransmissionParams& p, const Options& opt = {})
{
    p.validate();
    return eigen1d::ground_state(form(p), grid(p, opt), opt.res).energy;
}

/// Closed-form derivative [(m-1) gamma^2 + (1 - 1/m) xi^2 - (1+a) alpha] |f(0)|^2 from a computed state.
inline double dmu_dxi(const InterfaceGroundState& g)
{
    const auto& p = g.params;
    return ((p.m - 1.0) * g.gamma_eff * g.gamma_eff + (1.0 - 1.0 / p.m) * p.xi * p.xi - (1.0 + p.a) * p.alpha) *
           g.f0 * g.f0;
}

inline double dmu_dxi(const TransmissionParams& p, const Options& opt = {}) { return dmu_dxi(mu1(p, opt)); }

/// Exact xi-derivative of the (extrapolated) discrete eigenvalue: the expectation of dq/dxi.
inline double dmu_dxi_discrete(const InterfaceGroundState& g)
{
    const auto& p = g.params;
    auto dq = [&](double t) { return t < 0.0 ? -2.0 * (t - p.xi) / p.m : -2.0 * (t - p.xi); };
    const auto one = [](double) { return 1.0; };
    return g.state.extrapolate([&](const eigen1d::Level& l) {
        return eigen1d::interpolant_integral(l.pair, l.grid, dq, 3) /
               eigen1d::weighted_integral(l.pair, l.grid, one, eigen1d::Side::all);
    });
}

/// Second derivative 2(m-1)[gamma' gamma + xi/m] |f(0)|^2 with gamma' = gamma^2 - xi^2 + alpha + mu.
inline double d2mu_dxi2(const InterfaceGroundState& g)
{
    const auto& p = g.params;
    const double gp = g.gamma_eff * g.gamma_eff - p.xi * p.xi + p.alpha + g.mu1;
    return 2.0 * (p.m - 1.0) * (gp * g.gamma_eff + p.xi / p.m) * g.f0 * g.f0;
}

struct Sandwich {
    double lower = 0.0;
    double upper = 0.0;
    bool holds = false;
};

/// Min-max bounds from the Neumann and Dirichlet half-line problems.
inline Sandwich sandwich(const TransmissionParams& p, double mu, double slack = 1e-7,
                         const halfline::Options& hopt = {})
{
    const double lnp = halfline::lambda_neumann(1, p.xi, hopt);
    const double lnm = halfline::lambda_neumann(1, -p.xi, hopt);
    const double ldp = halfline::lambda_dirichlet(1, p.xi, hopt);
    const double ldm = halfline::lambda_dirichlet(1, -p.xi, hopt);
    Sandwich s;
    s.lower = std::min(lnp - p.alpha, lnm / p.m + p.a * p.alpha);
    s.upper = std::min(ldp - p.alpha, ldm / p.m + p.a * p.alpha);
    s.holds = s.lower - slack <= mu && mu <= s.upper + slack;
    return s;
}

struct Minimum {
    double xi_star = 0.0;
    double mu_star = 0.0;
    double second_derivative = 0.0;
    /// Closed-form derivative at xi_star (zero up to discretization error).
    double closed_form_derivative = 0.0;
    /// (m-1) gamma^2 + (1 - 1/m) xi^2 - (1+a) alpha at xi_star.
    double stationarity_bracket = 0.0;
    double gamma_eff = 0.0;
    double f0 = 0.0;
};

struct MinimizerSet {
    std::vector<Minimum> minima;
    bool infimum_attained = false;
    double infimum_value = 0.0;
    /// Bracket half-width d used by the scan (0 when m <= 1).
    double bracket = 0.0;
    /// 1 - alpha and 1/m + a alpha.
    double limit_plus = 0.0;
    double limit_minus = 0.0;
    /// mu_1 at the large-xi samples used for the unattained case.
    std::vector<double> tail_samples;
};

/// sqrt((1 + a) alpha / (1 - 1/m)), the bound on every minimizer when m > 1.
inline double minimizer_bound(double a, double m, double alpha)
{
    if (!(m > 1.0)) throw PreconditionError("minimizer_bound: m must be > 1");
    return std::sqrt((1.0 + a) * alpha / (1.0 - 1.0 / m));
}

namespace detail {

inline Minimum describe(const InterfaceGroundState& g)
{
    Minimum mn;
    mn.xi_star = g.params.xi;
    mn.mu_star = g.mu1;
    mn.second_derivative = d2mu_dxi2(g);
    mn.closed_form_derivative = dmu_dxi(g);
    const auto& p = g.params;
    mn.stationarity_bracket =
        (p.m - 1.0) * g.gamma_eff * g.gamma_eff + (1.0 - 1.0 / p.m) * p.xi * p.xi - (1.0 + p.a) * p.alpha;
    mn.gamma_eff = g.gamma_eff;
    mn.f0 = g.f0;
    return mn;
}

/// Zero of the discrete derivative inside [lo, hi]; falls back to Brent minimization without a sign change.
inline Minimum polish(double a, double m, double alpha, double lo, double hi, const Options& opt)
{
    auto deriv = [&](double xi) { return dmu_dxi_discrete(mu1({a, m, alpha, xi}, opt)); };
    const double dlo = deriv(lo), dhi = deriv(hi);
    double x;
    if (dlo < 0.0 && dhi > 0.0) {
        x = numeric::brent_root(deriv, lo, hi, opt.xi_tol).x;
    } else {
        x = numeric::brent_minimize([&](double xi) { return ground_energy({a, m, alpha, xi}, opt); }, lo, hi, opt.xi_tol).x;
    }
    return describe(mu1({a, m, alpha, x}, opt));
}

} // namespace detail

/// Local minimizer of mu_1(a, m, alpha; .) near `guess`: walks downhill along the
/// discrete derivative until it changes sign, then polishes.
inline Minimum local_minimum(double a, double m, double alpha, double guess, const Options& opt = {},
                             double step = 0.05)
{
    auto deriv = [&](double xi) { return dmu_dxi_discrete(mu1({a, m, alpha, xi}, opt)); };
    double x0 = guess;
    double d0 = deriv(x0);
    const double dir = d0 > 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < 60; ++i) {
        const double x1 = x0 + dir * step;
        const double d1 = deriv(x1);
        if ((d1 > 0.0) != (d0 > 0.0)) {
            const double lo = std::min(x0, x1), hi = std::max(x0, x1);
            return detail::describe(mu1({a, m, alpha, numeric::brent_root(deriv, lo, hi, opt.xi_tol).x}, opt));
        }
        x0 = x1;
        d0 = d1;
        step *= 1.5;
    }
    throw BracketError("local_minimum: derivative keeps its sign");
}

/// All local minima over xi, or the unattained infimum when m <= 1.
inline MinimizerSet minimize_over_xi(double a, double m, double alpha, const Options& opt = {})
{
    TransmissionParams{a, m, alpha, 0.0}.validate();
    if (!(alpha > 0.0)) throw PreconditionError("minimize_over_xi: alpha must be > 0");
    MinimizerSet out;
    out.limit_plus = 1.0 - alpha;
    out.limit_minus = 1.0 / m + a * alpha;

    if (m <= 1.0) {
        for (double xi : {4.0, 8.0, 12.0}) out.tail_samples.push_back(ground_energy({a, m, alpha, xi}, opt));
        out.infimum_attained = false;
        out.infimum_value = out.tail_samples.back();
        return out;
    }

    const double d = minimizer_bound(a, m, alpha);
    out.bracket = d;
    Options coarse = opt;
    coarse.res.richardson = false;
    const auto xs = numeric::linspace(-d, d, static_cast<std::size_t>(std::max(opt.scan_points, 5)));
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = ground_energy({a, m, alpha, xs[i]}, coarse);
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        const bool dip = ys[i] <= ys[i - 1] && ys[i] < ys[i + 1];
        if (dip && std::max(ys[i - 1], ys[i + 1]) - ys[i] > opt.plateau_tol) {
            out.minima.push_back(detail::polish(a, m, alpha, xs[i - 1], xs[i + 1], opt));
        }
    }
    if (out.minima.empty()) {
        throw AnomalyError("minimize_over_xi: no interior minimum for m > 1 (a=" + std::to_string(a) +
                           ", m=" + std::to_string(m) + ", alpha=" + std::to_string(alpha) + ")");
    }
    double best = out.minima.front().mu_star;
    for (const auto& mn : out.minima) best = std::min(best, mn.mu_star);
    const double tails = std::min(out.limit_plus, out.limit_minus);
    out.infimum_attained = best < tails;
    out.infimum_value = std::min(best, tails);
    return out;
}

struct Moments {
    /// int_+ (t-eta)|f|^2 + (1/m) int_- (t-eta)|f|^2.
    double r1 = 0.0;
    /// Third moment minus the right-hand side as printed.
    double r3 = 0.0;
    double lhs3 = 0.0;
    double rhs3 = 0.0;
    /// Third moment minus the right-hand side obtained by integrating by parts with the
    /// stationarity bracket B kept:
    ///     (1/6)(1-1/m) f0^2 - (eta^2/6) B f0^2 + (2/3)[(alpha+mu) int_+ s|f|^2 - (a alpha-mu) int_- s|f|^2].
    double r3_ibp = 0.0;
    double stationarity = 0.0;
};

/// Side integrals of (t - eta)^k |f|^2, Richardson extrapolated.
inline double side_moment(const InterfaceGroundState& g, int k, eigen1d::Side side, double eta)
{
    return g.state.integral([&](double t) { return std::pow(t - eta, k); }, side);
}

/// Moment identities at a minimizer eta of mu_1(a, m, alpha; .).
///
/// Throws when |dmu/dxi| at eta exceeds `stationarity_tol`.
inline Moments moment_residuals(double a, double m, double alpha, double eta, const Options& opt = {},
                                double stationarity_tol = 1e-6)
{
    const auto g = mu1({a, m, alpha, eta}, opt);
    Moments r;
    r.stationarity = dmu_dxi_discrete(g);
    if (!(std::abs(r.stationarity) <= stationarity_tol)) {
        throw PreconditionError("moment_residuals: eta is not stationary (derivative " +
                                std::to_string(r.stationarity) + ")");
    }
    using eigen1d::Side;
    const double f02 = g.f0 * g.f0;
    r.r1 = side_moment(g, 1, Side::right, eta) + side_moment(g, 1, Side::left, eta) / m;
    r.lhs3 = side_moment(g, 3, Side::right, eta) + side_moment(g, 3, Side::left, eta) / m;
    const double left_mass = side_moment(g, 0, Side::left, eta);
    r.rhs3 = (1.0 - 1.0 / m) * f02 / 6.0 + 2.0 * eta * eta * (eta * eta * (1.0 - 1.0 / m) - (a + 1.0) * alpha) * f02 +
             (a - 1.0 / m) * alpha / 3.0 * left_mass;
    r.r3 = r.lhs3 - r.rhs3;
    const double bracket = (m - 1.0) * g.gamma_eff * g.gamma_eff + (1.0 - 1.0 / m) * eta * eta - (1.0 + a) * alpha;
    const double mu = g.mu1;
    const double ibp = (1.0 - 1.0 / m) * f02 / 6.0 - eta * eta / 6.0 * bracket * f02 +
                       2.0 / 3.0 *
                           ((alpha + mu) * side_moment(g, 1, Side::right, eta) -
                            (a * alpha - mu) * side_moment(g, 1, Side::left, eta));
    r.r3_ibp = r.lhs3 - ibp;
    return r;
}

struct ModelCoefficients {
    double b1 = 0.0;
    double c_tilde1 = 0.0;
    double c_hat1 = 0.0;
    double eta = 0.0;
    double alpha = 0.0;
    double f0 = 0.0;
    double third_moment = 0.0;
};

/// b_1, C~_1 and C^_1 from the normalized ground state at (alpha, eta).
inline ModelCoefficients model_coefficients_at(double a, double m, double alpha, double eta, const Options& opt = {})
{
    if (!(m > 1.0)) throw PreconditionError("model_coefficients: m must be > 1");
    const auto g = mu1({a, m, alpha, eta}, opt);
    using eigen1d::Side;
    ModelCoefficients c;
    c.eta = eta;
    c.alpha = alpha;
    c.f0 = g.f0;
    c.b1 = side_moment(g, 0, Side::right, eta) - a * side_moment(g, 0, Side::left, eta);
    c.third_moment = side_moment(g, 3, Side::right, eta) + side_moment(g, 3, Side::left, eta) / m;
    const double trace = 0.5 * (1.0 - 1.0 / m) * g.f0 * g.f0;
    c.c_tilde1 = c.third_moment - trace;
    c.c_hat1 = c.third_moment + trace;
    return c;
}

} // namespace prox::transmission
