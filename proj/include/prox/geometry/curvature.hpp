// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "prox/core/error.hpp"

/// Signed curvature of a closed planar curve.
namespace prox::geometry {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Samples of a closed curve at uniformly spaced parameter values; the last
/// sample is not repeated. Self-intersection is not checked.
struct ClosedCurve {
    std::vector<Point> samples;
    bool closed = true;

    void validate() const
    {
        if (!closed) throw PreconditionError("curve: only closed curves are supported");
        if (samples.size() < 16) throw PreconditionError("curve: need at least 16 samples");
        const std::size_t n = samples.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& p = samples[i];
            const Point& q = samples[(i + 1) % n];
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw PreconditionError("curve: non-finite sample");
            if (p.x == q.x && p.y == q.y) {
                throw PreconditionError("curve: degenerate segment at sample " + std::to_string(i) +
                                        (i + 1 == n ? " (first and last samples coincide)" : ""));
            }
        }
    }
};

struct CurvatureOptions {
    /// Accuracy order of the periodic central differences: 2, 4, 6 or 8.
    int order = 8;
    /// Resample to uniform chord length with a periodic cubic spline before differentiating.
    bool arc_length_resample = false;
    /// Half-width k of a periodic moving average over 2k + 1 samples (0 = off).
    int smoothing = 0;
};

struct CurvatureProfile {
    /// Arc length at each station, starting at 0.
    std::vector<double> s;
    std::vector<double> kappa_r;
    double kappa_r_max = 0.0;
    double total_length = 0.0;
    /// Integral of kappa_r over the curve (2 pi for a positively oriented simple curve).
    double total_turning = 0.0;
};

namespace detail {

struct Stencil {
    std::array<double, 4> d1{};
    std::array<double, 4> d2{};
    double d2_center = 0.0;
    int width = 0;
};

inline Stencil stencil(int order)
{
    switch (order) {
    case 2: return {{1.0 / 2.0}, {1.0}, -2.0, 1};
    case 4: return {{2.0 / 3.0, -1.0 / 12.0}, {4.0 / 3.0, -1.0 / 12.0}, -5.0 / 2.0, 2};
    case 6: return {{3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0}, {3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0}, -49.0 / 18.0, 3};
    case 8:
        return {{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0},
                {8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0},
                -205.0 / 72.0,
                4};
    default: throw PreconditionError("curvature: order must be 2, 4, 6 or 8");
    }
}

/// First and second derivatives of periodic samples with unit spacing.
inline void periodic_derivatives(const std::vector<double>& f, const Stencil& st, std::vector<double>& d1,
                                 std::vector<double>& d2)
{
    const std::size_t n = f.size();
    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double a = 0.0, b = st.d2_center * f[i];
        for (int k = 1; k <= st.width; ++k) {
            const double fp = f[(i + static_cast<std::size_t>(k)) % n];
            const double fm = f[(i + n - static_cast<std::size_t>(k) % n) % n];
            a += st.d1[static_cast<std::size_t>(k - 1)] * (fp - fm);
            b += st.d2[static_cast<std::size_t>(k - 1)] * (fp + fm);
        }
        d1[i] = a;
        d2[i] = b;
    }
}

inline std::vector<double> moving_average(const std::vector<double>& f, int k)
{
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = -k; j <= k; ++j) {
            const auto len = static_cast<long>(n);
            s += f[static_cast<std::size_t>(((static_cast<long>(i) + j) % len + len) % len)];
        }
        out[i] = s / (2.0 * k + 1.0);
    }
    return out;
}

/// Second derivatives of the periodic cubic spline through (u_i, f_i), period `period`.
inline std::vector<double> periodic_spline_moments(const std::vector<double>& u, const std::vector<double>& f,
                                                   double period)
{
    const std::size_t n = u.size();
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = (i + 1 < n ? u[i + 1] : u[0] + period) - u[i];
    // cyclic tridiagonal system h_{i-1} M_{i-1} + 2(h_{i-1} + h_i) M_i + h_i M_{i+1} = rhs_i
    std::vector<double> diag(n), lower(n), upper(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n, ip = (i + 1) % n;
        lower[i] = h[im];
        upper[i] = h[i];
        diag[i] = 2.0 * (h[im] + h[i]);
        rhs[i] = 6.0 * ((f[ip] - f[i]) / h[i] - (f[i] - f[im]) / h[im]);
    }
    // Sherman-Morrison on the corner entries
    const double gamma = -diag[0];
    std::vector<double> b = diag;
    b[0] -= gamma;
    b[n - 1] -= lower[0] * upper[n - 1] / gamma;
    auto solve = [&](std::vector<double> d) {
        std::vector<double> c(n, 0.0), bb = b;
        for (std::size_t i = 1; i < n; ++i) {
            const double w = lower[i] / bb[i - 1];
            bb[i] -= w * upper[i - 1];
            d[i] -= w * d[i - 1];
        }
        c[n - 1] = d[n - 1] / bb[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) c[i] = (d[i] - upper[i] * c[i + 1]) / bb[i];
        return c;
    };
    std::vector<double> uvec(n, 0.0);
    uvec[0] = gamma;
    uvec[n - 1] = upper[n - 1];
    const auto y = solve(rhs);
    const auto z = solve(uvec);
    const double vy = y[0] + lower[0] / gamma * y[n - 1];
    const double vz = z[0] + lower[0] / gamma * z[n - 1];
    std::vector<double> mmt(n);
    for (std::size_t i = 0; i < n; ++i) mmt[i] = y[i] - vy / (1.0 + vz) * z[i];
    return mmt;
}

inline double spline_eval(const std::vector<double>& u, const std::vector<double>& f, const std::vector<double>& mmt,
                          double period, double x)
{
    const std::size_t n = u.size();
    x = std::fmod(x - u[0], period);
    if (x < 0.0) x += period;
    x += u[0];
    std::size_t i = static_cast<std::size_t>(std::upper_bound(u.begin(), u.end(), x) - u.begin());
    i = i == 0 ? 0 : i - 1;
    const std::size_t ip = (i + 1) % n;
    const double u1 = i + 1 < n ? u[i + 1] : u[0] + period;
    const double h = u1 - u[i];
    const double a = (u1 - x) / h, b = (x - u[i]) / h;
    return a * f[i] + b * f[ip] + ((a * a * a - a) * mmt[i] + (b * b * b - b) * mmt[ip]) * h * h / 6.0;
}

inline std::vector<Point> resample_by_chord(const std::vector<Point>& pts)
{
    const std::size_t n = pts.size();
    std::vector<double> u(n, 0.0), xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = pts[i].x;
        ys[i] = pts[i].y;
        if (i > 0) u[i] = u[i - 1] + std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
    }
    const double period = u[n - 1] + std::hypot(pts[0].x - pts[n - 1].x, pts[0].y - pts[n - 1].y);
    const auto mx = periodic_spline_moments(u, xs, period);
    const auto my = periodic_spline_moments(u, ys, period);
    std::vector<Point> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = period * static_cast<double>(i) / static_cast<double>(n);
        out[i] = {spline_eval(u, xs, mx, period, s), spline_eval(u, ys, my, period, s)};
    }
    return out;
}

} // namespace detail

/// Signed curvature (x'y'' - y'x'') / (x'^2 + y'^2)^{3/2}, positive on a counter-clockwise convex curve.
inline CurvatureProfile curvature_profile(const ClosedCurve& c, const CurvatureOptions& opt = {})
{
    c.validate();
    if (opt.smoothing < 0) throw PreconditionError("curvature: smoothing must be >= 0");
    const auto st = detail::stencil(opt.order);
    std::vector<Point> pts = opt.arc_length_resample ? detail::resample_by_chord(c.samples) : c.samples;
    const std::size_t n = pts.size();
    if (2 * static_cast<std::size_t>(opt.smoothing) + 1 > n) throw PreconditionError("curvature: smoothing window too wide");

    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = pts[i].x;
        ys[i] = pts[i].y;
    }
    if (opt.smoothing > 0) {
        xs = detail::moving_average(xs, opt.smoothing);
        ys = detail::moving_average(ys, opt.smoothing);
    }
    std::vector<double> x1, x2, y1, y2;
    detail::periodic_derivatives(xs, st, x1, x2);
    detail::periodic_derivatives(ys, st, y1, y2);

    CurvatureProfile p;
    p.kappa_r.resize(n);
    p.s.resize(n);
    std::vector<double> speed(n);
    for (std::size_t i = 0; i < n; ++i) {
        speed[i] = std::hypot(x1[i], y1[i]);
        if (!(speed[i] > 0.0)) throw PreconditionError("curvature: vanishing tangent at sample " + std::to_string(i));
        p.kappa_r[i] = (x1[i] * y2[i] - y1[i] * x2[i]) / (speed[i] * speed[i] * speed[i]);
    }
    // the trapezoid rule is spectrally accurate for periodic integrands
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p.s[i] = s;
        s += 0.5 * (speed[i] + speed[(i + 1) % n]);
        p.total_turning += p.kappa_r[i] * speed[i];
    }
    p.total_length = s;
    p.kappa_r_max = *std::max_element(p.kappa_r.begin(), p.kappa_r.end());
    return p;
}

/// Counter-clockwise samples of standard test curves.
inline ClosedCurve circle(double radius, std::size_t n, double cx = 0.0, double cy = 0.0)
{
    ClosedCurve c;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        c.samples.push_back({cx + radius * std::cos(t), cy + radius * std::sin(t)});
    }
    return c;
}

inline ClosedCurve ellipse(double semi_a, double semi_b, std::size_t n)
{
    ClosedCurve c;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        c.samples.push_back({semi_a * std::cos(t), semi_b * std::sin(t)});
    }
    return c;
}

/// Polar curve r = 1 + bump cos(4 t), a smooth rounded square.
inline ClosedCurve rounded_square(double bump, std::size_t n)
{
    ClosedCurve c;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        const double r = 1.0 + bump * std::cos(4.0 * t);
        c.samples.push_back({r * std::cos(t), r * std::sin(t)});
    }
    return c;
}

} // namespace prox::geometry
