// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "prox/eigen1d/solve.hpp"
#include "support/oracles.hpp"

using namespace prox::eigen1d;
using Catch::Approx;

namespace {

FunctionForm laplacian()
{
    return FunctionForm{};
}

PiecewiseHarmonicForm oscillator(double c = 0.0)
{
    PiecewiseHarmonicForm f;
    f.center = c;
    return f;
}

} // namespace

TEST_CASE("two-cell discrete Laplacian on [0, pi]", "[assemble]")
{
    const auto g = Grid::uniform(0.0, std::numbers::pi, 2);
    const auto p = assemble(laplacian(), g);
    REQUIRE(p.size() == 1);
    CHECK(p.m_diag[0] == Approx(std::numbers::pi / 2));
    const auto full = assemble(FunctionForm{[](double) { return 1.0; }, [](double) { return 0.0; },
                                            [](double) { return 1.0; }, Boundary::neumann(), Boundary::neumann()},
                               g);
    CHECK(full.k_off[0] == Approx(-2.0 / std::numbers::pi));
    const auto e = smallest_eigs(p, 1, 1e-15, g.size());
    CHECK(e[0].value == Approx(8.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("jump in the kinetic weight keeps the pencil symmetric and aligned", "[assemble]")
{
    PiecewiseHarmonicForm f = oscillator(0.3);
    f.kin_left = 0.25;
    f.pot_left = 0.25;
    f.shift_left = 0.8;
    f.shift_right = -0.8;
    const auto g = Grid::uniform(-4.0, 4.0, 16);
    const auto p = assemble(f, g);
    const auto o = *g.zero_index() - p.first_node;
    // the row at 0 mixes 1/4 from the left cell and 1 from the right cell
    CHECK(p.k_off[o - 1] < 0.0);
    CHECK(p.k_off[o] < 4.0 * p.k_off[o - 1] + 1.0);
    CHECK_THROWS_AS(assemble(f, Grid::uniform(-4.1, 4.0, 16)), prox::PreconditionError);
}

TEST_CASE("assembled stiffness matches per-element Simpson quadrature", "[assemble]")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double c0 = u(rng), c1 = u(rng), c2 = u(rng);
        FunctionForm f;
        f.q = [=](double t) { return c0 + c1 * t + c2 * t * t; };
        f.p = [](double t) { return t < 0.0 ? 0.5 : 1.5; };
        f.left = Boundary::neumann();
        f.right = Boundary::neumann();
        f.jump = true;
        f.points = 3;
        const auto g = Grid::uniform(-1.0, 2.0, 12);
        const auto p = assemble(f, g);
        const auto nodes = g.nodes();
        std::vector<double> kd(g.size(), 0.0), ko(g.size() - 1, 0.0);
        for (std::size_t c = 0; c + 1 < g.size(); ++c) {
            const auto e = oracle::element_by_simpson(f.p, f.q, nodes[c], nodes[c + 1]);
            kd[c] += e.k00;
            kd[c + 1] += e.k11;
            ko[c] += e.k01;
        }
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(p.k_diag[i] - kd[i]) <= 1e-14 * std::max(1.0, std::abs(kd[i])));
        for (std::size_t i = 0; i + 1 < g.size(); ++i) CHECK(std::abs(p.k_off[i] - ko[i]) <= 1e-14 * std::max(1.0, std::abs(ko[i])));
    }
}

TEST_CASE("non-positive kinetic weight is rejected", "[assemble]")
{
    FunctionForm f;
    f.p = [](double t) { return t - 0.5; };
    CHECK_THROWS_AS(assemble(f, Grid::uniform(0.0, 1.0, 8)), prox::PreconditionError);
}

TEST_CASE("Dirichlet Laplacian and harmonic oscillator spectra", "[eigs]")
{
    const auto g = Grid::uniform(0.0, std::numbers::pi, 4096);
    const auto e = solve_on(laplacian(), g, 2, 1e-13);
    CHECK(std::abs(e[0].value - 1.0) < 1e-6);
    CHECK(std::abs(e[1].value - 4.0) < 1e-5);

    const auto gh = Grid::uniform(-12.0, 12.0, 8192);
    const auto eh = solve_on(oscillator(), gh, 2, 1e-13);
    CHECK(std::abs(eh[0].value - 1.0) < 1e-6);
    CHECK(std::abs(eh[1].value - 3.0) < 1e-5);
    const Resolution res{.h = 24.0 / 8192, .richardson = true, .eig_tol = 1e-13};
    CHECK(std::abs(eigenvalue(oscillator(), gh, 1, res) - 1.0) < 1e-6);
    CHECK(std::abs(eigenvalue(oscillator(), gh, 2, res) - 3.0) < 1e-6);
}

TEST_CASE("random 7x7 pencils agree with a dense Jacobi oracle", "[eigs]")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.5, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        Pencil p;
        p.k_diag.resize(7);
        p.k_off.resize(6);
        p.m_diag.resize(7);
        p.m_off.assign(6, 0.0);
        for (auto& v : p.k_diag) v = 3.0 * u(rng);
        for (auto& v : p.k_off) v = u(rng);
        for (auto& v : p.m_diag) v = pos(rng);
        if (trial % 2) {
            for (std::size_t i = 0; i < 6; ++i) p.m_off[i] = 0.2 * u(rng) * std::min(p.m_diag[i], p.m_diag[i + 1]);
        }
        oracle::Dense k(7, std::vector<double>(7, 0.0)), m(7, std::vector<double>(7, 0.0));
        for (std::size_t i = 0; i < 7; ++i) {
            k[i][i] = p.k_diag[i];
            m[i][i] = p.m_diag[i];
            if (i < 6) {
                k[i][i + 1] = k[i + 1][i] = p.k_off[i];
                m[i][i + 1] = m[i + 1][i] = p.m_off[i];
            }
        }
        const auto ref = oracle::jacobi_pencil(k, m);
        const auto got = smallest_eigs(p, 7, 1e-15, 7);
        for (std::size_t i = 0; i < 7; ++i) CHECK(std::abs(got[i].value - ref[i]) < 1e-12);
    }
}

TEST_CASE("eigenpairs are normalized, ordered and the ground vector is positive", "[eigs]")
{
    const auto g = Grid::uniform(-8.0, 8.0, 1024);
    const auto e = solve_on(oscillator(0.5), g, 3, 1e-13);
    CHECK(e[0].value < e[1].value);
    CHECK(e[1].value < e[2].value);
    for (const auto& pair : e) {
        const double n2 = weighted_integral(pair, g, [](double) { return 1.0; }, Side::all);
        CHECK(n2 == Approx(1.0).epsilon(1e-12));
    }
    for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(e[0].vector[i] > 0.0);
    CHECK(e[0].index == 1);
}

TEST_CASE("a Dirichlet constraint at an interior node never lowers the ground energy", "[eigs]")
{
    const auto g = Grid::uniform(-6.0, 6.0, 240);
    const auto base = assemble(oscillator(0.2), g);
    const double l0 = smallest_eigs(base, 1, 1e-14, g.size())[0].value;
    for (std::size_t node : {30u, 100u, 121u, 200u}) {
        Pencil c = base;
        const std::size_t i = node - c.first_node;
        c.k_diag[i] = 1e12;
        c.k_off[i - 1] = c.k_off[i] = 0.0;
        CHECK(smallest_eigs(c, 1, 1e-14, g.size())[0].value >= l0 - 1e-12);
    }
}

TEST_CASE("second-order convergence under h-refinement", "[eigs]")
{
    std::vector<double> errs;
    for (std::size_t n : {200u, 400u, 800u, 1600u}) {
        errs.push_back(solve_on(oscillator(), Grid::uniform(-10.0, 10.0, n), 1, 1e-15)[0].value - 1.0);
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        const double r = errs[i] / errs[i + 1];
        CHECK(r > 3.2);
        CHECK(r < 4.8);
    }
}

TEST_CASE("consistent mass agrees with the lumped mass to second order", "[eigs]")
{
    const auto g = Grid::uniform(-10.0, 10.0, 2000);
    const double l = solve_on(oscillator(), g, 1, 1e-14, MassKind::lumped)[0].value;
    const double c = solve_on(oscillator(), g, 1, 1e-14, MassKind::consistent)[0].value;
    CHECK(std::abs(l - c) < 1e-3);
    CHECK(std::abs(l - c) > 1e-7);
    CHECK(std::abs(0.5 * (l + c) - 1.0) < std::abs(l - c));
}

TEST_CASE("converge reaches the oscillator energy and the shooting oracle", "[converge]")
{
    const auto r = converge(oscillator(), Grid::uniform(-8.0, 8.0, 256), 1e-10);
    CHECK(std::abs(r.value - 1.0) < 1e-9);

    const auto shifted = converge(oscillator(1.0), Grid::uniform(-10.0, 10.0, 400), 1e-10,
                                  ConvergeOptions{.max_cells = std::size_t{1} << 20, .max_enlargements = 0});
    const double ref = oracle::shooting_fullline(1.0, 1.0, 10.0);
    CHECK(std::abs(shifted.value - ref) < 1e-8);
}

TEST_CASE("ground energy does not increase as the right cut moves out", "[converge]")
{
    double prev = 1e300;
    for (double tmax : {2.0, 2.5, 3.0, 4.0, 6.0}) {
        const double v = solve_on(oscillator(), Grid::uniform(-8.0, tmax, static_cast<std::size_t>(64 * (8.0 + tmax))), 1, 1e-14)[0].value;
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("boundary traces of sampled profiles", "[traces]")
{
    const auto g = Grid::uniform(-5.0, 5.0, 2000);
    EigenPair gauss, cusp;
    for (double t : g.nodes()) {
        gauss.vector.push_back(std::exp(-t * t / 2.0));
        cusp.vector.push_back(std::exp(-std::abs(t)));
    }
    const auto tg = boundary_traces(gauss, g);
    CHECK(tg.f0 == Approx(1.0));
    CHECK(std::abs(*tg.fprime_plus) < 1e-4);
    CHECK(std::abs(*tg.fprime_minus) < 1e-4);
    const auto tc = boundary_traces(cusp, g);
    CHECK(*tc.fprime_plus == Approx(-1.0).epsilon(1e-4));
    CHECK(*tc.fprime_minus == Approx(1.0).epsilon(1e-4));

    CHECK_THROWS_AS(boundary_traces(gauss, Grid::uniform(0.5, 1.0, 4)), prox::PreconditionError);
    EigenPair tiny{0.0, {0.0, 1.0, 0.5}, 1};
    CHECK_THROWS_AS(boundary_traces(tiny, Grid::uniform(-1.0, 1.0, 2)), prox::PreconditionError);
}
