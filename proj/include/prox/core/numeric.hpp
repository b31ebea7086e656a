// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "prox/core/error.hpp"

/// Scalar root finding, 1D minimization and small numerical helpers.
namespace prox::numeric {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
};

/// Brent's method on a sign-changing bracket [a, b].
///
/// Throws BracketError when f(a) and f(b) share a sign.
template <class F>
RootResult brent_root(F&& f, double a, double b, double tol, int max_iter = 200)
{
    double fa = f(a);
    double fb = f(b);
    int evals = 2;
    if (fa == 0.0) return {a, fa, evals};
    if (fb == 0.0) return {b, fb, evals};
    if ((fa > 0.0) == (fb > 0.0)) {
        throw BracketError("brent_root: no sign change on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return {b, fb, evals};
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        ++evals;
    }
    throw ConvergenceError("brent_root: iteration budget exhausted");
}

/// Plain bisection; used where the caller wants the guaranteed halving behaviour.
template <class F>
RootResult bisect_root(F&& f, double a, double b, double tol, int max_iter = 200)
{
    double fa = f(a);
    double fb = f(b);
    int evals = 2;
    if ((fa > 0.0) == (fb > 0.0) && fa != 0.0 && fb != 0.0) {
        throw BracketError("bisect_root: no sign change");
    }
    for (int it = 0; it < max_iter && std::abs(b - a) > tol; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        ++evals;
        if (fm == 0.0) return {mid, fm, evals};
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    const bool left = std::abs(fa) < std::abs(fb);
    return {left ? a : b, left ? fa : fb, evals};
}

struct MinResult {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
};

/// Brent's minimizer: golden-section steps with parabolic interpolation.
template <class F>
MinResult brent_minimize(F&& f, double a, double b, double tol, int max_iter = 200)
{
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));
    const double eps = std::sqrt(std::numeric_limits<double>::epsilon());
    if (a > b) std::swap(a, b);
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x);
    double fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    int evals = 1;
    for (int it = 0; it < max_iter; ++it) {
        const double xm = 0.5 * (a + b);
        const double tol1 = eps * std::abs(x) + tol / 3.0;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
        bool golden_step = true;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double etemp = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (xm - x >= 0.0) ? tol1 : -tol1;
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x >= xm) ? a - x : b - x;
            d = golden * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = f(u);
        ++evals;
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx, evals};
}

/// Richardson extrapolation for an O(h^2) quantity sampled at h (coarse) and h/2 (fine).
inline double richardson(double fine, double coarse) { return (4.0 * fine - coarse) / 3.0; }

inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    out.back() = hi;
    return out;
}

inline std::vector<double> logspace(double lo, double hi, std::size_t n)
{
    if (!(lo > 0.0) || !(hi > 0.0)) throw PreconditionError("logspace: bounds must be positive");
    auto e = linspace(std::log(lo), std::log(hi), n);
    for (auto& x : e) x = std::exp(x);
    if (n > 0) {
        e.front() = lo;
        e.back() = hi;
    }
    return e;
}

/// Least-squares line y = c0 + c1 x.
inline std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw PreconditionError("fit_line: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw PreconditionError("fit_line: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / den;
    return {(sy - slope * sx) / n, slope};
}

} // namespace prox::numeric
