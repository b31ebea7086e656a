// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "prox/core/error.hpp"
#include "prox/core/numeric.hpp"
#include "prox/eigen1d/solve.hpp"

/// The de Gennes family -d^2/dt^2 + (t - xi)^2 on (0, inf) with u'(0) = gamma u(0).
namespace prox::halfline {

struct RobinParams {
    double gamma = 0.0;
    double xi = 0.0;
};

struct Options {
    eigen1d::Resolution res{1.0 / 96.0, true, 1e-14, eigen1d::MassKind::lumped, 1e-9};
    /// Right truncation sits this far beyond max(xi, 0).
    double window = 10.0;
    /// Absolute tolerance on the minimizer location.
    double xi_tol = 1e-8;
    /// Points of the coarse scan that brackets minima in xi.
    int scan_points = 41;
};

/// Theta(gamma) = inf_xi lambda_1(gamma, xi) with its minimizer and the trace |phi(0)|^2 there.
struct DeGennesCurve {
    double gamma = 0.0;
    double theta = 0.0;
    double xi_star = 0.0;
    double trace_sq = 0.0;
    /// xi_star^2 - theta - gamma^2.
    double residual = 0.0;
    /// Local minima seen by the coarse scan (1 when the minimizer is unique).
    int local_minima = 0;
};

struct UniversalConstants {
    double theta0 = 0.0;
    double xi0 = 0.0;
    double c1 = 0.0;
    /// Changes between the last two resolutions.
    double theta0_change = 0.0;
    double c1_change = 0.0;
    double h = 0.0;
};

namespace detail {

inline eigen1d::PiecewiseHarmonicForm form(double xi, eigen1d::Boundary left)
{
    eigen1d::PiecewiseHarmonicForm f;
    f.center = xi;
    f.left = left;
    f.right = eigen1d::Boundary::dirichlet();
    return f;
}

inline eigen1d::Grid grid(double xi, const Options& opt)
{
    const double t_max = std::max(xi, 0.0) + opt.window;
    const auto cells = static_cast<std::size_t>(std::ceil(t_max / opt.res.h));
    return eigen1d::Grid::uniform(0.0, t_max, cells);
}

} // namespace detail

/// Ground state of the Robin realization on a truncated half-line (Dirichlet at the cut).
inline eigen1d::GroundState lambda1_robin(RobinParams p, const Options& opt = {})
{
    if (!std::isfinite(p.gamma) || !std::isfinite(p.xi)) throw PreconditionError("lambda1_robin: non-finite parameter");
    return eigen1d::ground_state(detail::form(p.xi, eigen1d::Boundary::robin(p.gamma)), detail::grid(p.xi, opt), opt.res);
}

/// j-th eigenvalue with a Neumann condition at 0.
inline double lambda_neumann(std::size_t j, double xi, const Options& opt = {})
{
    if (j < 1) throw PreconditionError("lambda_neumann: j must be >= 1");
    return eigen1d::eigenvalue(detail::form(xi, eigen1d::Boundary::neumann()), detail::grid(xi, opt), j, opt.res);
}

/// j-th eigenvalue with a Dirichlet condition at 0.
inline double lambda_dirichlet(std::size_t j, double xi, const Options& opt = {})
{
    if (j < 1) throw PreconditionError("lambda_dirichlet: j must be >= 1");
    return eigen1d::eigenvalue(detail::form(xi, eigen1d::Boundary::dirichlet()), detail::grid(xi, opt), j, opt.res);
}

/// Memo of Theta(gamma); shared locking, so lookups may run concurrently.
class ThetaMemo {
public:
    std::optional<DeGennesCurve> find(double gamma, const Options& opt) const
    {
        std::shared_lock lock(mutex_);
        const auto it = table_.find(key(gamma, opt));
        if (it == table_.end()) return std::nullopt;
        return it->second;
    }

    void store(const DeGennesCurve& c, const Options& opt)
    {
        std::unique_lock lock(mutex_);
        table_.insert_or_assign(key(c.gamma, opt), c);
    }

    std::size_t size() const
    {
        std::shared_lock lock(mutex_);
        return table_.size();
    }

private:
    using Key = std::tuple<double, double, bool, double, double, double, int>;
    static Key key(double gamma, const Options& o)
    {
        return {gamma, o.res.h, o.res.richardson, o.res.eig_tol, o.window, o.xi_tol, o.scan_points};
    }

    mutable std::shared_mutex mutex_;
    std::map<Key, DeGennesCurve> table_;
};

/// Theta(gamma), xi(gamma) and |phi_gamma(0)|^2.
///
/// xi is searched on [0, B]: a coarse scan brackets every local minimum, the
/// bracket doubles while the smallest sample sits at the right edge, and each
/// minimum is refined by Brent's method.
inline DeGennesCurve theta_of(double gamma, const Options& opt = {}, ThetaMemo* memo = nullptr)
{
    if (!std::isfinite(gamma)) throw PreconditionError("theta_of: gamma must be finite");
    if (memo) {
        if (auto hit = memo->find(gamma, opt)) return *hit;
    }
    auto lam = [&](double xi) { return lambda1_robin({gamma, xi}, opt).energy; };

    const int n = std::max(opt.scan_points, 5);
    double upper = std::max(2.0, 1.5 * std::sqrt(std::max(gamma * gamma, 0.0) + 1.0));
    std::vector<double> xs, ys;
    for (int attempt = 0;; ++attempt) {
        xs = numeric::linspace(0.0, upper, static_cast<std::size_t>(n));
        ys.assign(xs.size(), 0.0);
        for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = lam(xs[i]);
        const auto imin = static_cast<std::size_t>(std::min_element(ys.begin(), ys.end()) - ys.begin());
        if (imin + 1 < xs.size()) break;
        if (attempt >= 6) throw BracketError("theta_of: minimizer escapes every bracket in xi");
        upper *= 2.0;
    }

    std::vector<numeric::MinResult> minima;
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        if (ys[i] <= ys[i - 1] && ys[i] <= ys[i + 1]) {
            minima.push_back(numeric::brent_minimize(lam, xs[i - 1], xs[i + 1], opt.xi_tol));
        }
    }
    if (minima.empty()) throw BracketError("theta_of: minimizer at the edge xi = 0");
    const auto best = *std::min_element(minima.begin(), minima.end(),
                                        [](const auto& a, const auto& b) { return a.fx < b.fx; });

    const auto gs = lambda1_robin({gamma, best.x}, opt);
    DeGennesCurve c;
    c.gamma = gamma;
    c.theta = gs.energy;
    c.xi_star = best.x;
    c.trace_sq = gs.traces.f0 * gs.traces.f0;
    c.residual = best.x * best.x - c.theta - gamma * gamma;
    c.local_minima = static_cast<int>(minima.size());
    if (memo) memo->store(c, opt);
    return c;
}

/// Theta_0, xi_0 and C_1 = |phi_0(0)|^2 / 3, halving h until Theta_0 and C_1 move by less than tol.
inline UniversalConstants universal_constants(double tol, Options opt = {})
{
    if (!(tol > 0.0)) throw PreconditionError("universal_constants: tol must be > 0");
    opt.res.h = std::max(opt.res.h, 1.0 / 48.0);
    DeGennesCurve prev = theta_of(0.0, opt);
    for (int level = 0; level < 8; ++level) {
        opt.res.h *= 0.5;
        const DeGennesCurve cur = theta_of(0.0, opt);
        const double dt = std::abs(cur.theta - prev.theta);
        const double dc = std::abs(cur.trace_sq - prev.trace_sq) / 3.0;
        if (dt < tol && dc < tol) return {cur.theta, cur.xi_star, cur.trace_sq / 3.0, dt, dc, opt.res.h};
        prev = cur;
    }
    throw ConvergenceError("universal_constants: no convergence under refinement");
}

/// The unique eta_0 < 0 with Theta(eta_0) = 0.
inline double eta0(const Options& opt = {}, ThetaMemo* memo = nullptr)
{
    double hi = 0.0;
    double lo = -0.5;
    while (theta_of(lo, opt, memo).theta >= 0.0) {
        hi = lo;
        lo *= 2.0;
        if (lo < -10.0) throw BracketError("eta0: Theta stays non-negative for gamma >= -10");
    }
    auto f = [&](double g) { return theta_of(g, opt, memo).theta; };
    return numeric::brent_root(f, lo, hi, 1e-12).x;
}

/// The unique ell in (0, 1) with Theta(gamma0 * ell) = ell^2.
inline double ell_of(double gamma0, const Options& opt = {}, ThetaMemo* memo = nullptr)
{
    if (!std::isfinite(gamma0)) throw PreconditionError("ell_of: gamma0 must be finite");
    auto h = [&](double eta) { return theta_of(gamma0 * eta, opt, memo).theta - eta * eta; };
    if (gamma0 == 0.0) return std::sqrt(theta_of(0.0, opt, memo).theta);
    return numeric::brent_root(h, 0.0, 1.0, 1e-12).x;
}

/// Inverse of the increasing map gamma -> Theta(gamma) on a bracket that is widened as needed.
inline double theta_inverse(double value, const Options& opt = {}, ThetaMemo* memo = nullptr)
{
    if (!(value < 1.0)) throw PreconditionError("theta_inverse: Theta takes values below 1 only");
    auto f = [&](double g) { return theta_of(g, opt, memo).theta - value; };
    double lo = -1.0, hi = 1.0;
    while (f(lo) > 0.0) {
        lo *= 2.0;
        if (lo < -64.0) throw BracketError("theta_inverse: no lower bracket");
    }
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 64.0) throw BracketError("theta_inverse: no upper bracket");
    }
    return numeric::brent_root(f, lo, hi, 1e-12).x;
}

} // namespace prox::halfline
