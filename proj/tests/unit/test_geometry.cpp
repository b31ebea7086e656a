// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "prox/geometry/curvature.hpp"

using namespace prox::geometry;

namespace {

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y)
{
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
    return d;
}

} // namespace

TEST_CASE("circle curvature is 1/R", "[curvature]")
{
    for (double r : {0.5, 2.0, 7.0}) {
        const auto p = curvature_profile(circle(r, 256, 0.3, -1.2));
        for (double k : p.kappa_r) CHECK(std::abs(k - 1.0 / r) < 1e-4);
        CHECK(std::abs(p.total_length - 2.0 * std::numbers::pi * r) < 1e-9 * r);
        CHECK(std::abs(p.total_turning - 2.0 * std::numbers::pi) < 1e-9);
    }
}

TEST_CASE("ellipse (2, 1) has maximal curvature 2 at the ends of the major axis", "[curvature]")
{
    const auto p = curvature_profile(ellipse(2.0, 1.0, 256));
    CHECK(std::abs(p.kappa_r_max - 2.0) < 1e-3);
    CHECK(std::abs(p.kappa_r.front() - 2.0) < 1e-3);
    CHECK(std::abs(p.kappa_r[64] - 0.25) < 1e-3);
    CHECK(std::abs(p.total_turning - 2.0 * std::numbers::pi) < 0.02 * std::numbers::pi);
}

TEST_CASE("rounded square curvature matches the polar formula", "[curvature]")
{
    // r = 1 + b cos 4t: kappa(0) = (r^2 + 2 r'^2 - r r'') / (r^2 + r'^2)^{3/2} with r' = 0, r'' = -16 b
    const double b = 0.1;
    const double r = 1.0 + b;
    const double k0 = (r * r + 16.0 * b * r) / (r * r * r);
    const auto p = curvature_profile(rounded_square(b, 512));
    CHECK(std::abs(p.kappa_r.front() - k0) < 1e-6);
    CHECK(std::abs(p.kappa_r_max - k0) < 1e-6);
}

TEST_CASE("lower difference orders converge to the same profile", "[curvature]")
{
    const auto c = ellipse(2.0, 1.0, 512);
    const auto ref = curvature_profile(c).kappa_r;
    double prev = 1.0;
    for (int order : {2, 4, 6}) {
        const double e = max_abs_diff(curvature_profile(c, {order}).kappa_r, ref);
        CHECK(e < prev);
        prev = e;
    }
    CHECK_THROWS_AS(curvature_profile(c, {3}), prox::PreconditionError);
}

TEST_CASE("rigid motions, scaling and orientation", "[invariance]")
{
    const auto base = rounded_square(0.08, 300);
    const auto p0 = curvature_profile(base);
    ClosedCurve moved = base;
    const double cs = std::cos(1.1), sn = std::sin(1.1);
    for (auto& q : moved.samples) q = {cs * q.x - sn * q.y - 4.0, sn * q.x + cs * q.y + 2.5};
    CHECK(max_abs_diff(p0.kappa_r, curvature_profile(moved).kappa_r) < 1e-10);

    ClosedCurve scaled = base;
    for (auto& q : scaled.samples) q = {3.0 * q.x, 3.0 * q.y};
    auto ks = curvature_profile(scaled).kappa_r;
    for (auto& k : ks) k *= 3.0;
    CHECK(max_abs_diff(p0.kappa_r, ks) < 1e-10);

    ClosedCurve rev = base;
    std::reverse(rev.samples.begin(), rev.samples.end());
    auto kr = curvature_profile(rev).kappa_r;
    std::reverse(kr.begin(), kr.end());
    for (auto& k : kr) k = -k;
    CHECK(max_abs_diff(p0.kappa_r, kr) < 1e-10);
}

TEST_CASE("chord-length resampling recovers curvature from non-uniform samples", "[resample]")
{
    ClosedCurve c;
    const std::size_t n = 400;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        const double t = u + 0.3 * std::sin(u);
        c.samples.push_back({1.5 * std::cos(t), 1.5 * std::sin(t)});
    }
    CurvatureOptions opt;
    opt.arc_length_resample = true;
    const auto p = curvature_profile(c, opt);
    for (double k : p.kappa_r) CHECK(std::abs(k - 1.0 / 1.5) < 1e-4);
}

TEST_CASE("smoothing damps sampling noise", "[smoothing]")
{
    auto c = circle(1.0, 512);
    std::mt19937 rng(3);
    std::normal_distribution<double> noise(0.0, 1e-6);
    for (auto& q : c.samples) q = {q.x + noise(rng), q.y + noise(rng)};
    CurvatureOptions raw;
    CurvatureOptions smooth;
    smooth.smoothing = 4;
    auto err = [](const CurvatureProfile& p) {
        double e = 0.0;
        for (double k : p.kappa_r) e = std::max(e, std::abs(k - 1.0));
        return e;
    };
    CHECK(err(curvature_profile(c, smooth)) < err(curvature_profile(c, raw)));
}

TEST_CASE("degenerate curves are rejected", "[preconditions]")
{
    CHECK_THROWS_AS(curvature_profile(circle(1.0, 8)), prox::PreconditionError);
    auto c = circle(1.0, 64);
    c.samples.push_back(c.samples.front());
    CHECK_THROWS_AS(curvature_profile(c), prox::PreconditionError);
    auto d = circle(1.0, 64);
    d.samples[5].x = std::nan("");
    CHECK_THROWS_AS(curvature_profile(d), prox::PreconditionError);
    auto e = circle(1.0, 64);
    e.closed = false;
    CHECK_THROWS_AS(curvature_profile(e), prox::PreconditionError);
    CurvatureOptions wide;
    wide.smoothing = 40;
    CHECK_THROWS_AS(curvature_profile(circle(1.0, 64), wide), prox::PreconditionError);
}
