// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>

#include "prox/fields/fields.hpp"
#include "prox/refined/refined.hpp"

using namespace prox::refined;

namespace {

const prox::fields::AlphaResult& root_1_4()
{
    static const auto r = prox::fields::alpha_of(1.0, 4.0);
    return r;
}

} // namespace

TEST_CASE("beta = 0 on a wide interval reproduces the flat family", "[reduction]")
{
    const double al = root_1_4().alpha;
    for (double xi : {0.5, 1.0, 1.5}) {
        const double flat = prox::transmission::ground_energy({1.0, 4.0, al, xi});
        const double red = mu1_refined({{1.0, 4.0, al, 0.0}, 1e-6, 0.0, 0.26}, xi);
        CHECK(std::abs(red - flat) < 1e-8);
    }
}

TEST_CASE("lumped and consistent mass agree on the curved operator", "[mass]")
{
    const double al = root_1_4().alpha;
    const double eta = prox::fields::detail::global_minimizer(root_1_4().minimizers).xi_star;
    const RefinedParams p{{1.0, 4.0, al, 0.0}, 1e-4, 1.0, 5.0 / 12.0};
    Options consistent;
    consistent.res.mass = prox::eigen1d::MassKind::consistent;
    CHECK(std::abs(mu1_refined(p, eta) - mu1_refined(p, eta, consistent)) < 1e-7);
}

TEST_CASE("second-order coefficient matches half the finite-difference curvature", "[expansion]")
{
    const auto c = expansion_check(1.0, 4.0, root_1_4().alpha, 1.0, {1e-2, 1e-3, 1e-4});
    CHECK(std::abs(c.d2 - c.d2_fd) < 1e-3);
    CHECK(c.d2 > 0.0);
    CHECK(c.d3_tilde == c.c_tilde1);
    CHECK(c.rows.size() == 3);
}

TEST_CASE("the minus trace sign fits the curved ground energy", "[expansion]")
{
    // the interval exponent 0.26 keeps truncation below the h^{1/2} correction down to h = 1e-6
    const auto c = expansion_check(1.0, 4.0, root_1_4().alpha, 1.0, {1e-3, 1e-4, 1e-5, 1e-6}, 0.26);
    CHECK(c.exponent_tilde > 0.9);
    CHECK(c.exponent_hat < 0.6);
    for (std::size_t i = 1; i < c.rows.size(); ++i) {
        CHECK(c.rows[i].scaled_residual_tilde < c.rows[i - 1].scaled_residual_tilde);
    }
    CHECK(c.rows.back().scaled_residual_tilde < 0.1 * c.rows.back().scaled_residual_hat);
}

TEST_CASE("energies away from eta are lifted by order h^{2 delta - 1/2}", "[penalty]")
{
    const double al = root_1_4().alpha;
    const auto mn = prox::fields::detail::global_minimizer(root_1_4().minimizers);
    for (double h : {1e-3, 1e-4}) {
        const RefinedParams p{{1.0, 4.0, al, 0.0}, h, 1.0};
        const double step = std::pow(h, p.delta - 0.25);
        for (double s : {-1.0, 1.0}) {
            CHECK(mu1_refined(p, mn.xi_star + s * step) - mn.mu_star > 0.1 * std::pow(h, 2.0 * p.delta - 0.5));
        }
    }
}

TEST_CASE("invalid refined parameters are rejected", "[preconditions]")
{
    const prox::transmission::TransmissionParams base{1.0, 4.0, 0.8, 0.0};
    CHECK_THROWS_AS(mu1_refined({base, 1e-2, 1.0, 0.6}, 0.0), prox::PreconditionError);
    CHECK_THROWS_AS(mu1_refined({base, 0.0, 1.0}, 0.0), prox::PreconditionError);
    CHECK_THROWS_AS(mu1_refined({base, 0.5, 3.0}, 0.0), prox::PreconditionError);
    CHECK_THROWS_AS(expansion_check(1.0, 0.5, 0.9, 1.0, {1e-2}), prox::PreconditionError);
    CHECK_THROWS_AS(expansion_check(1.0, 4.0, 0.9, 1.0, {1e-3, 1e-2}), prox::PreconditionError);
}
