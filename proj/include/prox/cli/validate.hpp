// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "prox/core/error.hpp"
#include "prox/eigen1d/solve.hpp"
#include "prox/fields/fields.hpp"
#include "prox/geometry/curvature.hpp"
#include "prox/halfline/halfline.hpp"
#include "prox/io/cache.hpp"
#include "prox/io/table.hpp"
#include "prox/refined/refined.hpp"
#include "prox/transmission/transmission.hpp"

/// Property suites run by `prox validate`.
namespace prox::cli {

struct Check {
    std::string suite;
    std::string name;
    double value = 0.0;
    /// Human-readable acceptance condition on `value`.
    std::string bound;
    bool pass = false;
};

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"eigen1d", "halfline", "transmission", "refined",
                                                "fields",  "geometry", "io"};
    return names;
}

namespace suites {

using Sink = std::function<void(std::string, double, std::string, bool)>;

inline eigen1d::FunctionForm oscillator(double c)
{
    eigen1d::FunctionForm f;
    f.q = [c](double t) { return (t - c) * (t - c); };
    return f;
}

inline void eigen1d_suite(const Sink& add)
{
    using namespace eigen1d;
    {
        FunctionForm f;
        f.p = [](double t) { return 1.0 + 0.3 * std::sin(t); };
        f.q = [](double t) { return t * t - 0.5 * t; };
        f.left = Boundary::robin(0.7);
        const auto p = assemble(f, Grid::uniform(-3.0, 3.0, 60));
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> x(p.size()), y(p.size());
        for (auto& v : x) v = u(rng);
        for (auto& v : y) v = u(rng);
        auto apply = [&](const std::vector<double>& v) {
            std::vector<double> out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                out[i] = p.k_diag[i] * v[i];
                if (i > 0) out[i] += p.k_off[i - 1] * v[i - 1];
                if (i + 1 < v.size()) out[i] += p.k_off[i] * v[i + 1];
            }
            return out;
        };
        const double xky = detail::dot(x, apply(y)), ykx = detail::dot(y, apply(x));
        const double v = std::abs(xky - ykx) / std::max(1.0, std::abs(xky));
        add("stiffness symmetry |x.Ky - y.Kx|", v, "< 1e-13", v < 1e-13);
    }
    {
        const auto e = solve_on(oscillator(0.0), Grid::uniform(-10.0, 10.0, 2000), 5, 1e-13);
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < e.size(); ++i) gap = std::min(gap, e[i].value - e[i - 1].value);
        add("eigenvalues strictly increasing (smallest gap)", gap, "> 1e-6", gap > 1e-6);
    }
    {
        const std::size_t cells = 240;
        const double lo = -6.0, hi = 6.0, h = (hi - lo) / static_cast<double>(cells);
        const auto f = oscillator(0.5);
        const double free_l1 = solve_on(f, Grid::uniform(lo, hi, cells), 1, 1e-13)[0].value;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k : {40u, 110u, 130u, 200u}) {
            const double tc = lo + h * static_cast<double>(k);
            const auto left = Grid::uniform(lo, tc, k);
            const auto right = Grid::uniform(tc, hi, cells - k);
            const double c = std::min(solve_on(f, left, 1, 1e-13)[0].value, solve_on(f, right, 1, 1e-13)[0].value);
            worst = std::min(worst, c - free_l1);
        }
        add("Dirichlet constraint never lowers lambda_1 (min increase)", worst, ">= 0", worst >= 0.0);
    }
    {
        std::vector<double> err;
        for (std::size_t cells : {64u, 128u, 256u, 512u}) {
            err.push_back(std::abs(solve_on(oscillator(0.0), Grid::uniform(-8.0, 8.0, cells), 1, 1e-14)[0].value - 1.0));
        }
        double lo = 1e300, hi = 0.0;
        for (std::size_t i = 1; i < err.size(); ++i) {
            lo = std::min(lo, err[i - 1] / err[i]);
            hi = std::max(hi, err[i - 1] / err[i]);
        }
        add("h-refinement error ratio (min)", lo, "in [3.2, 4.8]", lo >= 3.2 && hi <= 4.8);
        add("h-refinement error ratio (max)", hi, "in [3.2, 4.8]", lo >= 3.2 && hi <= 4.8);
    }
    {
        // Dirichlet end nodes carry the boundary value 0
        const auto g = transmission::mu1({1.0, 4.0, 0.8, 0.7});
        const auto& v = g.state.fine.pair.vector;
        const double mn = *std::min_element(v.begin() + 1, v.end() - 1);
        add("ground vector positive (transmission, min free entry)", mn, "> 0", mn > 0.0);
        const auto r = halfline::lambda1_robin({-0.5, 1.0});
        const auto& w = r.fine.pair.vector;
        const double mr = *std::min_element(w.begin(), w.end() - 1);
        add("ground vector positive (Robin, min free entry)", mr, "> 0", mr > 0.0);
    }
}

inline void halfline_suite(const Sink& add)
{
    using namespace halfline;
    {
        double worst = std::numeric_limits<double>::infinity();
        for (double xi : {0.0, 0.8, 1.5}) {
            double prev = -std::numeric_limits<double>::infinity();
            for (double g : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
                const double l = lambda1_robin({g, xi}).energy;
                worst = std::min(worst, l - prev);
                prev = l;
            }
        }
        add("lambda_1 nondecreasing in gamma (min step)", worst, ">= 0", worst >= 0.0);
    }
    {
        double worst = 0.0;
        const double d = 1e-3;
        for (auto [g, xi] : {std::pair{0.0, 0.5}, std::pair{0.5, 1.2}, std::pair{-0.5, 0.3}}) {
            const auto s = lambda1_robin({g, xi});
            const double fd = (lambda1_robin({g, xi + d}).energy - lambda1_robin({g, xi - d}).energy) / (2.0 * d);
            const double cf = -(s.energy - xi * xi + g * g) * s.traces.f0 * s.traces.f0;
            worst = std::max(worst, std::abs(fd - cf) / std::max(std::abs(cf), 1e-12));
        }
        add("d lambda_1 / d xi closed form vs central difference (max rel)", worst, "< 1e-3", worst < 1e-3);
    }
    {
        double worst = 0.0, theta_max = -1.0;
        for (double g : {-0.5, 0.0, 1.0, 2.0}) {
            const auto c = theta_of(g);
            worst = std::max(worst, std::abs(c.residual));
            theta_max = std::max(theta_max, c.theta);
        }
        add("xi(gamma)^2 - Theta(gamma) - gamma^2 (max abs)", worst, "< 1e-5", worst < 1e-5);
        add("Theta(gamma) < 1 (max sampled)", theta_max, "< 1", theta_max < 1.0);
        const double t8 = theta_of(8.0).theta;
        add("Theta(8)", t8, "> 0.999", t8 > 0.999);
    }
}

inline void transmission_suite(const Sink& add)
{
    using namespace transmission;
    const double a = 1.0, m = 4.0, al = 0.8;
    {
        bool all = true;
        double margin = std::numeric_limits<double>::infinity();
        for (double xi : {-1.0, 0.0, 0.7, 2.0}) {
            const double mu = ground_energy({a, m, al, xi});
            const auto s = sandwich({a, m, al, xi}, mu);
            all = all && s.holds;
            margin = std::min({margin, mu - s.lower, s.upper - mu});
        }
        add("sandwich bounds hold (min margin)", margin, "holds at every sample", all);
    }
    {
        const double dp = std::abs(ground_energy({a, m, al, 8.0}) - (1.0 - al));
        const double dm = std::abs(ground_energy({a, m, al, -8.0}) - (1.0 / m + a * al));
        add("mu_1 at xi = 8 vs 1 - alpha", dp, "< 2e-2", dp < 2e-2);
        add("mu_1 at xi = -8 vs 1/m + a alpha", dm, "< 2e-2", dm < 2e-2);
    }
    {
        const double r = mu1({a, m, al, 0.7}).trace_residual;
        add("transmission condition residual", r, "<= 5e-3", r <= 5e-3);
    }
    {
        const auto set = minimize_over_xi(a, m, al);
        double br = 0.0, d2 = std::numeric_limits<double>::infinity();
        for (const auto& mn : set.minima) {
            br = std::max(br, std::abs(mn.stationarity_bracket));
            d2 = std::min(d2, mn.second_derivative);
        }
        add("stationarity bracket at minimizers (max abs)", br, "< 1e-4", br < 1e-4);
        add("second derivative at minimizers (min)", d2, "> 0", d2 > 0.0);
    }
}

inline void refined_suite(const Sink& add)
{
    using namespace refined;
    const double a = 1.0, m = 4.0;
    const double al = fields::alpha_of(a, m).alpha;
    {
        const double xi = 0.8;
        const double flat = transmission::ground_energy({a, m, al, xi});
        const double red = mu1_refined({{a, m, al, 0.0}, 1e-6, 0.0, 0.26}, xi);
        const double v = std::abs(red - flat);
        add("beta = 0 on a wide interval reproduces the flat family", v, "< 1e-8", v < 1e-8);
    }
    const auto eta = transmission::local_minimum(a, m, al, 1.0);
    {
        std::vector<double> cs;
        for (double h : {1e-2, 1e-3, 1e-4}) {
            const RefinedParams curved{{a, m, al, 0.0}, h, 1.0};
            const RefinedParams flat{{a, m, al, 0.0}, h, 0.0};
            const double mc = mu1_refined(curved, eta.xi_star), mf = mu1_refined(flat, eta.xi_star);
            cs.push_back(std::abs(mc - mf) / (std::pow(h, 2.0 * curved.delta - 0.5) * (1.0 + std::abs(mf))));
        }
        const double cmax = *std::max_element(cs.begin(), cs.end());
        const bool bounded = cs.back() <= cs.front();
        add("spectral continuity constant C (max over h sweep)", cmax, "C(h) does not grow as h decreases", bounded);
    }
    {
        double worst = std::numeric_limits<double>::infinity();
        for (double h : {1e-3, 1e-4}) {
            const RefinedParams p{{a, m, al, 0.0}, h, 1.0};
            const double step = std::pow(h, p.delta - 0.25);
            const double scale = std::pow(h, 2.0 * p.delta - 0.5);
            for (double s : {-1.0, 1.0}) {
                const double mu = mu1_refined(p, eta.xi_star + s * step);
                worst = std::min(worst, (mu - eta.mu_star) / scale);
            }
        }
        add("penalty away from eta (min of (mu - d0) / h^{2 delta - 1/2})", worst, "> 0", worst > 0.0);
    }
}

inline void fields_suite(const Sink& add)
{
    using namespace fields;
    const double tol = 1e-10;
    const auto root = alpha_of(1.0, 4.0, tol);
    add("root residual |inf mu_1| at alpha(1, 4)", root.residual, "<= 10 tol", root.residual <= 10.0 * tol);
    {
        const double theta0 = halfline::theta_of(0.0).theta;
        const auto grid = numeric::linspace(theta0, 1.0, 40);
        int changes = 0;
        double prev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double g = detail::global_min(transmission::minimize_over_xi(1.0, 4.0, grid[i]));
            if (i > 0 && (g > 0.0) != (prev > 0.0)) ++changes;
            prev = g;
        }
        add("sign changes of inf mu_1 over a 40-point alpha scan", changes, "== 1", changes == 1);
    }
    {
        halfline::ThetaMemo memo;
        const auto b1 = hc3_degennes(0.5, 0.3, 10.0, {}, &memo);
        const auto b2 = hc3_degennes(1.0, 1e-9, 10.0, {}, &memo);
        const double v = std::abs(b1.hc3_leading - b2.hc3_leading) / b1.hc3_leading;
        add("de Gennes dispatch corner delta = 1, gamma0 -> 0 (rel)", v, "< 1e-6", v < 1e-6);
    }
    {
        const auto c = model_coefficients(1.0, 10.0, tol);
        const double kr = 1.7, kappa = 50.0;
        const auto r = hc3_two_term(c, 10.0, 10.0, kappa, kr);
        const double v = std::abs((*r.hc3_two_term - r.hc3_leading) - c.curvature_coeff * kr / std::pow(c.alpha, 1.5));
        add("two-term minus leading equals C_1 kappa_r / alpha^{3/2}", v, "< 1e-12", v < 1e-12);
    }
}

inline void geometry_suite(const Sink& add)
{
    using namespace geometry;
    const auto base = ellipse(2.0, 1.0, 256);
    const auto p0 = curvature_profile(base);
    auto max_diff = [](const std::vector<double>& x, const std::vector<double>& y) {
        double d = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
        return d;
    };
    {
        ClosedCurve moved = base;
        const double c = std::cos(0.7), s = std::sin(0.7);
        for (auto& q : moved.samples) q = {c * q.x - s * q.y + 3.0, s * q.x + c * q.y - 2.0};
        const double d = max_diff(p0.kappa_r, curvature_profile(moved).kappa_r);
        add("rigid motion leaves kappa_r unchanged", d, "< 1e-10", d < 1e-10);
    }
    {
        ClosedCurve scaled = base;
        for (auto& q : scaled.samples) q = {2.5 * q.x, 2.5 * q.y};
        auto k = curvature_profile(scaled).kappa_r;
        for (auto& v : k) v *= 2.5;
        const double d = max_diff(p0.kappa_r, k);
        add("scaling by lambda scales kappa_r by 1/lambda", d, "< 1e-10", d < 1e-10);
    }
    {
        ClosedCurve rev = base;
        std::reverse(rev.samples.begin(), rev.samples.end());
        auto k = curvature_profile(rev).kappa_r;
        std::reverse(k.begin(), k.end());
        for (auto& v : k) v = -v;
        const double d = max_diff(p0.kappa_r, k);
        add("reversed orientation flips the sign of kappa_r", d, "< 1e-10", d < 1e-10);
    }
    {
        const auto pc = curvature_profile(circle(2.0, 256, 1.0, -1.0));
        double d = 0.0;
        for (double k : pc.kappa_r) d = std::max(d, std::abs(k - 0.5));
        add("circle R = 2: |kappa_r - 1/R|", d, "< 1e-4", d < 1e-4);
        const double e = std::abs(p0.kappa_r_max - 2.0);
        add("ellipse (2, 1): |max kappa_r - 2|", e, "< 1e-3", e < 1e-3);
        const double t = std::abs(p0.total_turning - 2.0 * std::numbers::pi) / (2.0 * std::numbers::pi);
        add("total turning vs 2 pi (rel)", t, "< 1e-2", t < 1e-2);
    }
}

inline void io_suite(const Sink& add)
{
    {
        io::Table t;
        t.columns = {"name", "x", "n", "flag", "missing"};
        const std::vector<double> xs{0.1, 1.0 / 3.0, 1e-300, 5e-324, -0.0, 6.02214076e23, std::nextafter(1.0, 2.0)};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            t.add_row({"row, \"" + std::to_string(i) + "\"", xs[i], static_cast<long long>(i), i % 2 == 0, nullptr});
        }
        const auto via_csv = io::from_csv(io::to_csv(t));
        const auto via_json = io::from_json(io::to_json(via_csv));
        const bool ok = io::same_data(t, via_csv) && io::same_data(t, via_json) && io::to_csv(via_json) == io::to_csv(t);
        add("CSV -> JSON -> CSV round trip is lossless", ok ? 0.0 : 1.0, "identical", ok);
    }
    {
        const auto dir = std::filesystem::temp_directory_path() /
                         ("prox-validate-" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
        const io::Cache cache(dir);
        const nlohmann::json params = {{"a", 1.0}, {"m", 4.0}};
        const auto k1 = io::Cache::key("alpha", params, {{"tol", 1e-10}});
        const auto k2 = io::Cache::key("alpha", params, {{"tol", 1e-9}});
        const auto k3 = io::Cache::key("alpha", params, {{"tol", 1e-10}}, solver_revision + 1);
        const std::string value = "{\"alpha\":0.87769572288400004}";
        cache.put(k1, value);
        const auto got = cache.get(k1);
        const bool same = got && got->value == value;
        add("cache put then get returns identical bytes", same ? 0.0 : 1.0, "identical", same);
        add("different tolerance gives a different key", k1 != k2 ? 0.0 : 1.0, "keys differ", k1 != k2);
        add("solver revision bump gives a different key", k1 != k3 ? 0.0 : 1.0, "keys differ", k1 != k3);
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
    }
}

} // namespace suites

/// Runs the named suite ("all" for every suite).
inline std::vector<Check> run_suite(const std::string& name)
{
    const auto& names = suite_names();
    if (name != "all" && std::find(names.begin(), names.end(), name) == names.end()) {
        std::string list;
        for (const auto& n : names) list += " " + n;
        throw PreconditionError("validate: unknown suite '" + name + "'; expected all or one of" + list);
    }
    std::vector<Check> out;
    for (const auto& s : names) {
        if (name != "all" && name != s) continue;
        const suites::Sink add = [&](std::string check, double value, std::string bound, bool pass) {
            out.push_back({s, std::move(check), value, std::move(bound), pass});
        };
        try {
            if (s == "eigen1d") suites::eigen1d_suite(add);
            if (s == "halfline") suites::halfline_suite(add);
            if (s == "transmission") suites::transmission_suite(add);
            if (s == "refined") suites::refined_suite(add);
            if (s == "fields") suites::fields_suite(add);
            if (s == "geometry") suites::geometry_suite(add);
            if (s == "io") suites::io_suite(add);
        } catch (const Error& e) {
            out.push_back({s, std::string("suite raised ") + e.kind() + ": " + e.what(), 0.0, "no error", false});
        }
    }
    return out;
}

} // namespace prox::cli
