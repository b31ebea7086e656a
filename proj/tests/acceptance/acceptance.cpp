// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "prox/eigen1d/solve.hpp"
#include "prox/fields/fields.hpp"
#include "prox/geometry/curvature.hpp"
#include "prox/halfline/halfline.hpp"
#include "prox/refined/refined.hpp"
#include "prox/transmission/transmission.hpp"
#include "support/oracles.hpp"

namespace {

namespace hl = prox::halfline;
namespace tr = prox::transmission;
namespace fd = prox::fields;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string num(double v) { return fmt("%.10g", v); }

struct Shared {
    hl::UniversalConstants u;
    double seconds = 0.0;
    hl::ThetaMemo memo;
    std::map<double, fd::AlphaResult> roots;

    const fd::AlphaResult& root(double m)
    {
        auto it = roots.find(m);
        if (it == roots.end()) it = roots.emplace(m, fd::alpha_of(1.0, m)).first;
        return it->second;
    }
};

Outcome c1_theta0(Shared& s)
{
    const bool in = s.u.theta0 >= 0.585 && s.u.theta0 <= 0.595;
    const bool conv = s.u.theta0_change < 1e-8;
    const bool fast = s.seconds < 10.0;
    return {in && conv && fast, "Theta0 = " + num(s.u.theta0) + " in [0.585, 0.595], change " + num(s.u.theta0_change) +
                                    " < 1e-8, " + fmt("%.2f", s.seconds) + " s < 10 s"};
}

Outcome c2_c1(Shared& s)
{
    const double k = 3.0 * s.u.c1;
    return {k >= 0.858 - 0.003 && k <= 0.888 + 0.003, "3 C1 = " + num(k) + " in [0.855, 0.891]"};
}

Outcome c3_xi_identity(Shared& s)
{
    double worst = 0.0;
    for (double g : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        const auto d = hl::theta_of(g, {}, &s.memo);
        worst = std::max(worst, std::abs(d.xi_star * d.xi_star - d.theta - g * g));
    }
    return {worst < 1e-5, "max |xi^2 - Theta - gamma^2| = " + num(worst) + " < 1e-5"};
}

Outcome c4_derivatives(Shared& s)
{
    double worst_theta = 0.0;
    const double d = 1e-3;
    for (double g : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        const double fdv = (hl::theta_of(g + d, {}, &s.memo).theta - hl::theta_of(g - d, {}, &s.memo).theta) / (2.0 * d);
        const double tr2 = hl::theta_of(g, {}, &s.memo).trace_sq;
        worst_theta = std::max(worst_theta, std::abs(tr2 - fdv) / std::abs(fdv));
    }
    double worst_mu = 0.0;
    const double dx = 1e-4;
    for (const tr::TransmissionParams p :
         {tr::TransmissionParams{1.0, 4.0, 0.8, 0.7}, tr::TransmissionParams{1.0, 4.0, 0.8, -0.3},
          tr::TransmissionParams{2.0, 0.5, 0.9, 1.5}, tr::TransmissionParams{1.0, 10.0, 0.7, 0.9},
          tr::TransmissionParams{0.5, 2.0, 0.95, 2.0}, tr::TransmissionParams{1.0, 100.0, 0.65, 0.3}}) {
        auto q = p;
        q.xi = p.xi + dx;
        const double up = tr::ground_energy(q);
        q.xi = p.xi - dx;
        const double fdv = (up - tr::ground_energy(q)) / (2.0 * dx);
        worst_mu = std::max(worst_mu, std::abs(tr::dmu_dxi(p) - fdv) / std::abs(fdv));
    }
    return {worst_theta < 1e-3 && worst_mu < 1e-3,
            "Theta' rel err " + num(worst_theta) + ", dmu/dxi rel err " + num(worst_mu) + " (both < 1e-3)"};
}

Outcome c5_sturm_order(Shared&)
{
    double margin = 1e300;
    for (double xi : {-1.0, 0.0, 0.5, 1.0, 2.0, 3.0}) {
        margin = std::min(margin, hl::lambda_neumann(2, xi) - hl::lambda_dirichlet(1, xi));
    }
    return {margin > 1e-6, "min lambda2_N - lambda1_D = " + num(margin) + " > 1e-6"};
}

Outcome c6_limits(Shared&)
{
    const double a = 1.0, m = 4.0, al = 0.8;
    const double ep = std::abs(tr::ground_energy({a, m, al, 8.0}) - (1.0 - al));
    const double em = std::abs(tr::ground_energy({a, m, al, -8.0}) - (1.0 / m + a * al));
    return {ep < 2e-2 && em < 2e-2, "|mu(8) - (1-alpha)| = " + num(ep) + ", |mu(-8) - (1/m + a alpha)| = " + num(em) +
                                        " (both < 2e-2)"};
}

Outcome c7_unit_branch(Shared&)
{
    const auto set = tr::minimize_over_xi(1.0, 0.5, 0.9);
    const double err = std::abs(set.infimum_value - 0.1);
    return {!set.infimum_attained && err < 2e-2,
            std::string("attained = ") + (set.infimum_attained ? "true" : "false") + ", |inf - (1-alpha)| = " + num(err) +
                " < 2e-2"};
}

Outcome c8_alpha(Shared& s)
{
    const std::vector<double> ms{1.5, 2.0, 4.0, 10.0, 100.0};
    bool ok = true;
    double worst = 0.0;
    std::string vals;
    double prev = 2.0;
    for (double m : ms) {
        const auto& r = s.root(m);
        worst = std::max(worst, r.residual);
        ok = ok && r.resolved && r.alpha < prev && r.alpha > s.u.theta0 && r.alpha < 1.0;
        prev = r.alpha;
        vals += (vals.empty() ? "" : ", ") + fmt("%.6f", r.alpha);
    }
    return {ok && worst < 1e-6, "alpha = {" + vals + "}, max residual " + num(worst) + " < 1e-6"};
}

Outcome c9_large_m(Shared& s)
{
    const double target = 3.0 * s.u.c1 * std::sqrt(s.u.theta0);
    std::string vals;
    double last = 0.0;
    for (double m : {1e2, 1e3, 1e4}) {
        last = (s.root(m).alpha - s.u.theta0) * std::sqrt(m);
        vals += (vals.empty() ? "" : ", ") + fmt("%.6f", last);
    }
    const double rel = std::abs(last - target) / target;
    return {rel < 0.05, "(alpha - Theta0) sqrt(m) = {" + vals + "}, target " + num(target) + ", rel err " + num(rel) +
                            " < 0.05"};
}

Outcome c10_drift(Shared& s)
{
    const double b = fd::drift_constant(1.0, s.u.c1);
    std::string vals;
    double last = 0.0;
    for (double m : {1e2, 1e3, 1e4}) {
        last = (fd::detail::global_minimizer(s.root(m).minimizers).xi_star - s.u.xi0) * std::sqrt(m);
        vals += (vals.empty() ? "" : ", ") + fmt("%.6f", last);
    }
    const double rel = std::abs(last - b) / std::abs(b);
    return {rel < 0.10, "(xi* - xi0) sqrt(m) = {" + vals + "}, b = " + num(b) + ", rel err " + num(rel) + " < 0.10"};
}

Outcome c11_moments(Shared& s)
{
    double w1 = 0.0, w3 = 0.0, w3i = 0.0;
    for (double m : {4.0, 100.0}) {
        const auto& r = s.root(m);
        const double eta = fd::detail::global_minimizer(r.minimizers).xi_star;
        const auto mo = tr::moment_residuals(1.0, m, r.alpha, eta);
        w1 = std::max(w1, std::abs(mo.r1));
        w3 = std::max(w3, std::abs(mo.r3));
        w3i = std::max(w3i, std::abs(mo.r3_ibp));
    }
    return {w1 < 1e-4 && w3 < 1e-4, "max |r1| = " + num(w1) + ", max |r3| = " + num(w3) + " (both < 1e-4); by parts |r3| = " +
                                        num(w3i)};
}

Outcome c12_expansion(Shared& s)
{
    const auto c = prox::refined::expansion_check(1.0, 4.0, s.root(4.0).alpha, 1.0, {1e-2, 1e-3, 1e-4});
    const double d2err = std::abs(c.d2 - c.d2_fd);
    std::string hat, tilde;
    for (const auto& r : c.rows) {
        hat += (hat.empty() ? "" : ", ") + fmt("%.4g", r.scaled_residual_hat);
        tilde += (tilde.empty() ? "" : ", ") + fmt("%.4g", r.scaled_residual_tilde);
    }
    return {!c.winner.empty() && d2err < 1e-3, "winner '" + c.winner + "', plus {" + hat + "}, minus {" + tilde +
                                                   "}, |d2 - d2_fd| = " + num(d2err) + " < 1e-3"};
}

Outcome c13_curvature_limit(Shared& s)
{
    const auto c = fd::model_coefficients(s.root(1e4));
    const double target = (1.0 + 6.0 * s.u.theta0 * s.u.theta0) * s.u.c1;
    const double rel = std::abs(c.curvature_coeff - target) / target;
    return {rel < 0.05, "C1(1, 1e4) = " + num(c.curvature_coeff) + ", (1 + 6 Theta0^2) C1 = " + num(target) +
                            ", rel err " + num(rel) + " < 0.05; C1 = " + num(s.u.c1)};
}

Outcome c14_degennes(Shared& s)
{
    const double kappa = 20.0;
    const auto lo = fd::hc3_degennes(0.5, 0.7, kappa, {}, &s.memo);
    const auto corner = fd::hc3_degennes(1.0, 1e-9, kappa, {}, &s.memo);
    const double corner_err = std::abs(corner.hc3_leading - lo.hc3_leading) / lo.hc3_leading;
    const double ell_err = std::abs(hl::ell_of(0.0, {}, &s.memo) - std::sqrt(s.u.theta0));
    const double e0 = hl::eta0({}, &s.memo);
    const double th = std::abs(hl::theta_of(e0, {}, &s.memo).theta);
    const auto pos = fd::hc3_degennes(1.5, 0.7, kappa, {}, &s.memo);
    const auto neg = fd::hc3_degennes(1.5, -0.7, kappa, {}, &s.memo);
    const bool branches = lo.hc3_leading == kappa / hl::theta_of(0.0, {}, &s.memo).theta && pos.hc3_leading == kappa &&
                          std::abs(neg.hc3_leading - std::pow(0.7 / e0, 2) * kappa * kappa) < 1e-9 * neg.hc3_leading;
    return {branches && corner_err < 1e-6 && ell_err < 1e-6 && th < 1e-7,
            std::string("branches ") + (branches ? "ok" : "wrong") + ", corner rel " + num(corner_err) +
                " < 1e-6, |l(0) - sqrt(Theta0)| = " + num(ell_err) + " < 1e-6, |Theta(eta0)| = " + num(th) + " < 1e-7"};
}

Outcome c15_geometry(Shared&)
{
    namespace g = prox::geometry;
    const auto circ = g::curvature_profile(g::circle(1.5, 256));
    double ce = 0.0;
    for (double k : circ.kappa_r) ce = std::max(ce, std::abs(k - 1.0 / 1.5));
    const auto el = g::curvature_profile(g::ellipse(2.0, 1.0, 256));
    const double ee = std::abs(el.kappa_r_max - 2.0);
    const double te = std::abs(el.total_turning - 2.0 * std::numbers::pi) / (2.0 * std::numbers::pi);
    return {ce < 1e-4 && ee < 1e-3 && te < 0.01, "circle err " + num(ce) + " < 1e-4, ellipse max err " + num(ee) +
                                                     " < 1e-3, turning rel err " + num(te) + " < 0.01"};
}

Outcome c16_order(Shared&)
{
    namespace e = prox::eigen1d;
    e::PiecewiseHarmonicForm osc;
    std::vector<double> errs;
    for (std::size_t n : {200u, 400u, 800u, 1600u}) {
        errs.push_back(e::solve_on(osc, e::Grid::uniform(-10.0, 10.0, n), 1, 1e-15)[0].value - 1.0);
    }
    bool ok = true;
    std::string vals;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        const double r = errs[i] / errs[i + 1];
        ok = ok && r >= 3.2 && r <= 4.8;
        vals += (vals.empty() ? "" : ", ") + fmt("%.4f", r);
    }
    return {ok, "error ratios {" + vals + "} in [3.2, 4.8]"};
}

Outcome c17_oracles(Shared&)
{
    namespace e = prox::eigen1d;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.5, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        e::Pencil p;
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
        const auto got = e::smallest_eigs(p, 7, 1e-15, 7);
        for (std::size_t i = 0; i < 7; ++i) worst = std::max(worst, std::abs(got[i].value - ref[i]));
    }
    double shoot = 0.0;
    for (const tr::TransmissionParams p : {tr::TransmissionParams{1.0, 4.0, 0.8, 0.7},
                                           tr::TransmissionParams{2.0, 0.5, 0.9, -0.5},
                                           tr::TransmissionParams{1.0, 10.0, 0.7, 1.2}}) {
        const double fem = tr::ground_energy(p);
        const double ref = oracle::shooting_transmission(p.a, p.m, p.alpha, p.xi, fem, -(std::max(-p.xi, 0.0) + 14.0),
                                                         std::max(p.xi, 0.0) + 12.0);
        shoot = std::max(shoot, std::abs(fem - ref));
    }
    return {worst < 1e-12 && shoot < 1e-7,
            "Jacobi max diff " + num(worst) + " < 1e-12 (100 trials), shooting max diff " + num(shoot) + " < 1e-7"};
}

} // namespace

int main()
{
    Shared s;
    const auto t0 = std::chrono::steady_clock::now();
    s.u = hl::universal_constants(1e-8);
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::vector<std::pair<std::string, std::function<Outcome(Shared&)>>> criteria{
        {"Theta0 value and convergence", c1_theta0},
        {"3 C1 interval", c2_c1},
        {"xi(gamma)^2 identity", c3_xi_identity},
        {"derivative formulas", c4_derivatives},
        {"Sturm ordering", c5_sturm_order},
        {"transmission limits", c6_limits},
        {"m <= 1 infimum not attained", c7_unit_branch},
        {"alpha root and monotonicity", c8_alpha},
        {"large-m law for alpha", c9_large_m},
        {"minimizer drift", c10_drift},
        {"moment identities", c11_moments},
        {"refined expansion sign", c12_expansion},
        {"curvature coefficient limit", c13_curvature_limit},
        {"de Gennes dispatch", c14_degennes},
        {"boundary curvature", c15_geometry},
        {"kernel order", c16_order},
        {"oracle equivalence", c17_oracles},
    };
    int passed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto c0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second(s);
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count();
        if (o.pass) ++passed;
        std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), sec);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", passed, criteria.size());
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
