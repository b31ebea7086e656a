// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <concepts>
#include <functional>
#include <utility>

namespace prox::eigen1d {

/// End condition of the truncated interval.
struct Boundary {
    enum class Kind { dirichlet, robin };

    Kind kind = Kind::dirichlet;
    /// Coefficient of the boundary term gamma * |u(end)|^2 in the form (Robin only).
    double gamma = 0.0;

    static Boundary dirichlet() { return {Kind::dirichlet, 0.0}; }
    static Boundary robin(double g) { return {Kind::robin, g}; }
    static Boundary neumann() { return {Kind::robin, 0.0}; }

    bool is_dirichlet() const { return kind == Kind::dirichlet; }
};

/// A weighted quadratic form
///     u -> int p(t) |u'|^2 + q(t) |u|^2 dt + boundary terms
/// on L^2(w dt). The coefficients may jump at t = 0 only; they are never
/// evaluated exactly at a node, so either one-sided value is fine there.
///
/// `quadrature_points()` selects the per-element Gauss rule: 3 points are exact
/// when q is a polynomial of degree <= 3 on each element, 5 points up to degree 7.
template <class F>
concept QuadraticForm = requires(const F& f, double t) {
    { f.kinetic(t) } -> std::convertible_to<double>;
    { f.potential(t) } -> std::convertible_to<double>;
    { f.density(t) } -> std::convertible_to<double>;
    { f.left_boundary() } -> std::convertible_to<Boundary>;
    { f.right_boundary() } -> std::convertible_to<Boundary>;
    { f.quadrature_points() } -> std::convertible_to<int>;
    { f.jump_at_zero() } -> std::convertible_to<bool>;
};

/// Type-erased form assembled from callables; handy for tests and one-off operators.
struct FunctionForm {
    std::function<double(double)> p = [](double) { return 1.0; };
    std::function<double(double)> q = [](double) { return 0.0; };
    std::function<double(double)> w = [](double) { return 1.0; };
    Boundary left = Boundary::dirichlet();
    Boundary right = Boundary::dirichlet();
    int points = 5;
    bool jump = false;

    double kinetic(double t) const { return p(t); }
    double potential(double t) const { return q(t); }
    double density(double t) const { return w(t); }
    Boundary left_boundary() const { return left; }
    Boundary right_boundary() const { return right; }
    int quadrature_points() const { return points; }
    bool jump_at_zero() const { return jump; }
};

/// -u'' + (t - c)^2 u with constant coefficients on either side of 0:
/// p = kin_left / kin_right and q = pot_scale_side * (t - c)^2 + shift_side.
/// Covers the harmonic oscillator, the Robin half-line family and the
/// transmission family.
struct PiecewiseHarmonicForm {
    double center = 0.0;
    double kin_left = 1.0, kin_right = 1.0;
    double pot_left = 1.0, pot_right = 1.0;
    double shift_left = 0.0, shift_right = 0.0;
    Boundary left = Boundary::dirichlet();
    Boundary right = Boundary::dirichlet();

    double kinetic(double t) const { return t < 0.0 ? kin_left : kin_right; }
    double potential(double t) const
    {
        const double s = t - center;
        return t < 0.0 ? pot_left * s * s + shift_left : pot_right * s * s + shift_right;
    }
    double density(double) const { return 1.0; }
    Boundary left_boundary() const { return left; }
    Boundary right_boundary() const { return right; }
    int quadrature_points() const { return 3; }
    bool jump_at_zero() const
    {
        return kin_left != kin_right || pot_left != pot_right || shift_left != shift_right;
    }
};

static_assert(QuadraticForm<FunctionForm>);
static_assert(QuadraticForm<PiecewiseHarmonicForm>);

} // namespace prox::eigen1d
