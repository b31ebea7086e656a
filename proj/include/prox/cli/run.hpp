// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "prox/cli/validate.hpp"
#include "prox/core/error.hpp"
#include "prox/core/version.hpp"
#include "prox/fields/fields.hpp"
#include "prox/geometry/curvature.hpp"
#include "prox/halfline/halfline.hpp"
#include "prox/io/cache.hpp"
#include "prox/io/range.hpp"
#include "prox/io/table.hpp"
#include "prox/refined/refined.hpp"
#include "prox/transmission/transmission.hpp"

/// Command dispatch, sweeps, result caching and artifact emission for the `prox` tool.
namespace prox::cli {

using io::json;

struct RunConfig {
    std::string command;
    /// Command evaluated point-wise by `sweep`.
    std::string target;
    /// Raw values keyed by flag name without dashes, e.g. "kappa-r-max".
    std::map<std::string, std::string> parameters;
    std::string output_format = "csv";
    std::optional<std::filesystem::path> output_path;
    std::optional<std::filesystem::path> cache_dir;
    /// Overrides: "tol" (root and convergence tolerance) and "h" (base grid spacing).
    std::map<std::string, double> tolerances;
    int jobs = 1;
};

enum class Exit { ok = 0, failed_checks = 1, usage = 2, numerical = 3, io = 4 };

enum class Kind { number, list, text };

struct ParamSpec {
    std::string name;
    Kind kind = Kind::number;
    std::string help;
    /// Used when the flag is absent; no fallback and not optional means required.
    std::optional<std::string> fallback;
    bool optional = false;
};

struct Point {
    std::map<std::string, double> num;
    std::map<std::string, std::vector<double>> list;
    std::map<std::string, std::string> text;

    double at(const std::string& k) const { return num.at(k); }
    bool has(const std::string& k) const { return num.count(k) > 0; }

    json as_json() const
    {
        json j = json::object();
        for (const auto& [k, v] : num) j[k] = v;
        for (const auto& [k, v] : list) j[k] = v;
        for (const auto& [k, v] : text) j[k] = v;
        return j;
    }
};

struct Context {
    fields::Settings settings;
    refined::Options refined;
    double tol = 1e-10;
    halfline::ThetaMemo* memo = nullptr;
};

struct Result {
    std::vector<std::vector<json>> rows;
    json summary;
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<ParamSpec> params;
    std::vector<std::string> columns;
    bool sweepable = false;
    bool cacheable = true;
    double default_tol = 1e-10;
    std::function<Result(const Point&, const Context&)> eval;
};

namespace detail {

inline json opt_value(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline geometry::ClosedCurve read_curve(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "curvature: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto t = io::from_csv(buf.str());
    const auto col = [&](const std::string& n) {
        const auto it = std::find(t.columns.begin(), t.columns.end(), n);
        if (it == t.columns.end()) throw PreconditionError("curvature: input needs columns x and y");
        return static_cast<std::size_t>(it - t.columns.begin());
    };
    const std::size_t ix = col("x"), iy = col("y");
    geometry::ClosedCurve c;
    for (const auto& row : t.rows) {
        if (!row[ix].is_number() || !row[iy].is_number()) throw PreconditionError("curvature: x and y must be numbers");
        c.samples.push_back({row[ix].get<double>(), row[iy].get<double>()});
    }
    return c;
}

inline int as_int(double v, const std::string& what)
{
    if (v != std::floor(v) || std::abs(v) > 1e9) throw PreconditionError(what + " must be an integer");
    return static_cast<int>(v);
}

} // namespace detail

inline const std::vector<CommandSpec>& commands()
{
    using P = ParamSpec;
    static const std::vector<CommandSpec> table = [] {
        std::vector<CommandSpec> c;
        c.push_back({"constants", "Theta_0, xi_0 and C_1 refined until successive values agree to --tol",
                     {},
                     {"theta0", "xi0", "c1", "theta0_change", "c1_change", "h"},
                     false, true, 1e-8,
                     [](const Point&, const Context& ctx) {
                         const auto u = halfline::universal_constants(ctx.tol, ctx.settings.halfline);
                         return Result{{{u.theta0, u.xi0, u.c1, u.theta0_change, u.c1_change, u.h}}, nullptr};
                     }});
        c.push_back({"theta", "Theta(gamma), its minimizer xi(gamma) and |phi_gamma(0)|^2",
                     {P{"gamma", Kind::number, "Robin parameter", std::nullopt}},
                     {"gamma", "theta", "xi_star", "trace_sq", "residual", "local_minima"},
                     true, true, 1e-10,
                     [](const Point& p, const Context& ctx) {
                         const auto d = halfline::theta_of(p.at("gamma"), ctx.settings.halfline, ctx.memo);
                         return Result{{{d.gamma, d.theta, d.xi_star, d.trace_sq, d.residual, d.local_minima}}, nullptr};
                     }});
        c.push_back({"mu1", "Ground state of the transmission family at one (a, m, alpha, xi)",
                     {P{"a", Kind::number, "exterior potential weight", std::nullopt},
                      P{"m", Kind::number, "exterior kinetic weight ratio", std::nullopt},
                      P{"alpha", Kind::number, "spectral parameter", std::nullopt},
                      P{"xi", Kind::number, "Fourier parameter", std::nullopt}},
                     {"a", "m", "alpha", "xi", "mu1", "f0", "fprime_plus", "fprime_minus", "gamma_eff",
                      "trace_residual", "dmu_dxi"},
                     true, true, 1e-10,
                     [](const Point& p, const Context& ctx) {
                         const transmission::TransmissionParams tp{p.at("a"), p.at("m"), p.at("alpha"), p.at("xi")};
                         const auto g = transmission::mu1(tp, ctx.settings.interface);
                         return Result{{{tp.a, tp.m, tp.alpha, tp.xi, g.mu1, g.f0, g.fprime_plus, g.fprime_minus,
                                         g.gamma_eff, g.trace_residual, transmission::dmu_dxi(g)}},
                                       nullptr};
                     }});
        c.push_back({"alpha", "The root alpha(a, m) of inf_xi mu_1 = 0",
                     {P{"a", Kind::number, "exterior potential weight", std::nullopt},
                      P{"m", Kind::number, "exterior kinetic weight ratio", std::nullopt}},
                     {"a", "m", "alpha", "branch", "resolved", "residual", "xi_star", "minimizers", "evaluations"},
                     true, true, 1e-10,
                     [](const Point& p, const Context& ctx) {
                         const auto r = fields::alpha_of(p.at("a"), p.at("m"), ctx.tol, ctx.settings);
                         json xs = nullptr;
                         if (r.branch == fields::Branch::interior && !r.minimizers.minima.empty() && r.resolved) {
                             xs = fields::detail::global_minimizer(r.minimizers).xi_star;
                         }
                         return Result{{{r.a, r.m, r.alpha, fields::to_string(r.branch), r.resolved, r.residual, xs,
                                         static_cast<long long>(r.minimizers.minima.size()),
                                         static_cast<long long>(r.evaluations)}},
                                       nullptr};
                     }});
        c.push_back({"hc3", "Leading-order H_C3 = kappa / alpha(a, m), and the two-term formula with --kappa-r-max",
                     {P{"a", Kind::number, "exterior potential weight", std::nullopt},
                      P{"m", Kind::number, "exterior kinetic weight ratio", std::nullopt},
                      P{"kappa", Kind::number, "Ginzburg-Landau parameter", std::nullopt},
                      P{"kappa-r-max", Kind::number, "maximal boundary curvature", std::nullopt, true},
                      P{"m0", Kind::number, "smallest m where the two-term formula applies", std::nullopt, true}},
                     {"a", "m", "kappa", "alpha", "hc3_leading", "hc3_two_term", "coeff_c1", "kappa_r_max", "regime"},
                     true, true, 1e-10,
                     [](const Point& p, const Context& ctx) {
                         const double a = p.at("a"), m = p.at("m"), kappa = p.at("kappa");
                         if (!(kappa > 0.0)) throw PreconditionError("hc3: kappa must be > 0");
                         const auto root = fields::alpha_of(a, m, ctx.tol, ctx.settings);
                         fields::CriticalFieldReport r;
                         if (p.has("kappa-r-max")) {
                             if (!p.has("m0")) throw PreconditionError("hc3: --kappa-r-max needs --m0");
                             if (root.branch != fields::Branch::interior) {
                                 throw RegimeError("hc3: the two-term formula needs m > 1");
                             }
                             const auto coeffs = fields::model_coefficients(root, ctx.settings);
                             r = fields::hc3_two_term(coeffs, m, p.at("m0"), kappa, p.at("kappa-r-max"));
                         } else {
                             r = fields::hc3_leading(root, kappa);
                         }
                         return Result{{{a, m, kappa, r.alpha, r.hc3_leading, detail::opt_value(r.hc3_two_term),
                                         r.kappa_r_max ? json(r.coeff_c1) : json(nullptr),
                                         detail::opt_value(r.kappa_r_max), r.regime}},
                                       nullptr};
                     }});
        c.push_back({"degennes", "Leading-order H_C3 with de Gennes boundary parameter kappa^delta gamma0",
                     {P{"delta", Kind::number, "exponent of kappa in the boundary parameter", std::nullopt},
                      P{"gamma0", Kind::number, "boundary parameter prefactor", std::nullopt},
                      P{"kappa", Kind::number, "Ginzburg-Landau parameter", std::nullopt}},
                     {"delta", "gamma0", "kappa", "alpha", "hc3_leading", "regime"},
                     true, true, 1e-10,
                     [](const Point& p, const Context& ctx) {
                         const auto r = fields::hc3_degennes(p.at("delta"), p.at("gamma0"), p.at("kappa"),
                                                             ctx.settings.halfline, ctx.memo);
                         return Result{{{p.at("delta"), p.at("gamma0"), r.kappa, r.alpha, r.hc3_leading, r.regime}},
                                       nullptr};
                     }});
        c.push_back({"refined-check", "Curvature-perturbed ground energy against d0 + d3 h^{1/2} for both trace signs",
                     {P{"a", Kind::number, "exterior potential weight", std::nullopt},
                      P{"m", Kind::number, "exterior kinetic weight ratio (> 1)", std::nullopt},
                      P{"beta", Kind::number, "curvature", "1"},
                      P{"h-list", Kind::list, "decreasing semiclassical parameters h", "1e-2,1e-3,1e-4"},
                      P{"delta", Kind::number, "interval exponent in (1/4, 1/2)", "0.41666666666666669"},
                      P{"alpha", Kind::number, "spectral parameter (default alpha(a, m))", std::nullopt, true}},
                     {"h", "mu1_computed", "scaled_residual_hat", "scaled_residual_tilde"},
                     false, true, 1e-10,
                     [](const Point& p, const Context& ctx) {
                         const double a = p.at("a"), m = p.at("m");
                         const double al = p.has("alpha") ? p.at("alpha") : fields::alpha_of(a, m, ctx.tol, ctx.settings).alpha;
                         const auto c = refined::expansion_check(a, m, al, p.at("beta"), p.list.at("h-list"), p.at("delta"),
                                                                 ctx.refined, ctx.settings.interface);
                         Result r;
                         for (const auto& row : c.rows) {
                             r.rows.push_back({row.h, row.mu1_computed, row.scaled_residual_hat, row.scaled_residual_tilde});
                         }
                         r.summary = {{"alpha_hat", c.alpha_hat}, {"eta_hat", c.eta_hat}, {"d0", c.d0},
                                      {"d2", c.d2},           {"d2_fd", c.d2_fd},     {"c_hat1", c.c_hat1},
                                      {"c_tilde1", c.c_tilde1}, {"d3_hat", c.d3_hat}, {"d3_tilde", c.d3_tilde},
                                      {"exponent_hat", c.exponent_hat}, {"exponent_tilde", c.exponent_tilde},
                                      {"winner", c.winner}};
                         return r;
                     }});
        c.push_back({"curvature", "Signed curvature profile of a closed curve read from CSV (columns x, y)",
                     {P{"input", Kind::text, "CSV file with columns x and y", std::nullopt},
                      P{"order", Kind::number, "finite-difference order (2, 4, 6 or 8)", "8"},
                      P{"smoothing", Kind::number, "moving-average half-width (0 = off)", "0"},
                      P{"resample", Kind::number, "1 to resample to uniform chord length", "0"}},
                     {"s", "kappa_r"},
                     false, false, 1e-10,
                     [](const Point& p, const Context&) {
                         geometry::CurvatureOptions o;
                         o.order = detail::as_int(p.at("order"), "curvature: --order");
                         o.smoothing = detail::as_int(p.at("smoothing"), "curvature: --smoothing");
                         const int rs = detail::as_int(p.at("resample"), "curvature: --resample");
                         if (rs != 0 && rs != 1) throw PreconditionError("curvature: --resample must be 0 or 1");
                         o.arc_length_resample = rs == 1;
                         const auto prof = geometry::curvature_profile(detail::read_curve(p.text.at("input")), o);
                         Result r;
                         for (std::size_t i = 0; i < prof.s.size(); ++i) r.rows.push_back({prof.s[i], prof.kappa_r[i]});
                         r.summary = {{"kappa_r_max", prof.kappa_r_max},
                                      {"total_length", prof.total_length},
                                      {"total_turning", prof.total_turning}};
                         return r;
                     }});
        c.push_back({"validate", "Run property suites and emit a pass/fail table",
                     {P{"suite", Kind::text, "all, eigen1d, halfline, transmission, refined, fields, geometry or io", "all"}},
                     {"suite", "check", "value", "bound", "pass"},
                     false, false, 1e-10,
                     [](const Point& p, const Context&) {
                         Result r;
                         for (const auto& ch : run_suite(p.text.at("suite"))) {
                             r.rows.push_back({ch.suite, ch.name, ch.value, ch.bound, ch.pass});
                         }
                         return r;
                     }});
        return c;
    }();
    return table;
}

inline const CommandSpec& find_command(const std::string& name)
{
    for (const auto& c : commands()) {
        if (c.name == name) return c;
    }
    throw PreconditionError("unknown command '" + name + "'");
}

inline Context make_context(const RunConfig& cfg, const CommandSpec& spec, halfline::ThetaMemo* memo)
{
    for (const auto& [k, v] : cfg.tolerances) {
        if (k != "tol" && k != "h") throw PreconditionError("unknown tolerance override '" + k + "'");
        if (!(v > 0.0) || !std::isfinite(v)) throw PreconditionError("tolerance override '" + k + "' must be > 0");
    }
    Context ctx;
    ctx.memo = memo;
    ctx.tol = cfg.tolerances.count("tol") ? cfg.tolerances.at("tol") : spec.default_tol;
    if (cfg.tolerances.count("h")) {
        const double h = cfg.tolerances.at("h");
        if (h > 0.25) throw PreconditionError("tolerance override 'h' must be <= 0.25");
        ctx.settings.halfline.res.h = h;
        ctx.settings.interface.res.h = h;
        ctx.refined.res.h = 0.5 * h;
    }
    return ctx;
}

inline json tolerance_record(const Context& ctx)
{
    return {{"tol", ctx.tol},
            {"eig_tol", ctx.settings.interface.res.eig_tol},
            {"tail_tol", ctx.settings.interface.res.tail_tol},
            {"halfline_xi_tol", ctx.settings.halfline.xi_tol},
            {"interface_xi_tol", ctx.settings.interface.xi_tol},
            {"plateau_tol", ctx.settings.interface.plateau_tol}};
}

inline json grid_record(const Context& ctx)
{
    return {{"h", ctx.settings.interface.res.h},
            {"halfline_h", ctx.settings.halfline.res.h},
            {"refined_h", ctx.refined.res.h},
            {"richardson", ctx.settings.interface.res.richardson},
            {"mass", ctx.settings.interface.res.mass == eigen1d::MassKind::lumped ? "lumped" : "consistent"},
            {"halfline_window", ctx.settings.halfline.window},
            {"interface_right_window", ctx.settings.interface.right_window},
            {"interface_left_window", ctx.settings.interface.left_window}};
}

/// Expands raw parameters into evaluation points; ranges only when `sweep` is set.
inline std::vector<Point> expand(const CommandSpec& spec, const std::map<std::string, std::string>& raw, bool sweep)
{
    for (const auto& [k, v] : raw) {
        const bool known = std::any_of(spec.params.begin(), spec.params.end(), [&](const ParamSpec& p) { return p.name == k; });
        if (!known) throw PreconditionError(spec.name + ": unknown parameter '" + k + "'");
    }
    std::vector<Point> pts(1);
    for (const auto& ps : spec.params) {
        const auto it = raw.find(ps.name);
        std::optional<std::string> value;
        if (it != raw.end()) value = it->second;
        else if (ps.fallback) value = ps.fallback;
        if (!value) {
            if (ps.optional) continue;
            throw PreconditionError(spec.name + ": missing required parameter --" + ps.name);
        }
        const std::string what = spec.name + ": --" + ps.name;
        if (ps.kind == Kind::text) {
            for (auto& p : pts) p.text[ps.name] = *value;
        } else if (ps.kind == Kind::list) {
            const auto v = io::parse_range(*value, what);
            for (auto& p : pts) p.list[ps.name] = v;
        } else {
            const auto v = io::parse_range(*value, what);
            if (v.size() != 1 && !sweep) throw PreconditionError(what + " takes a single value; use `sweep` for ranges");
            std::vector<Point> next;
            for (const auto& p : pts) {
                for (double x : v) {
                    Point q = p;
                    q.num[ps.name] = x;
                    next.push_back(std::move(q));
                }
            }
            pts = std::move(next);
        }
    }
    if (pts.size() > 100000) throw PreconditionError(spec.name + ": sweep exceeds 100000 points");
    return pts;
}

inline json result_to_json(const Result& r)
{
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(row);
    return {{"rows", rows}, {"summary", r.summary}};
}

inline Result result_from_json(const json& j, std::size_t width)
{
    Result r;
    for (const auto& row : j.at("rows")) {
        if (!row.is_array() || row.size() != width) throw std::runtime_error("row width mismatch");
        r.rows.push_back(row.get<std::vector<json>>());
    }
    r.summary = j.at("summary");
    return r;
}

inline int exit_code(const std::string& kind)
{
    if (kind == "precondition" || kind == "usage") return static_cast<int>(Exit::usage);
    if (kind == "io") return static_cast<int>(Exit::io);
    return static_cast<int>(Exit::numerical);
}

inline void write_error(std::ostream& err, const std::string& kind, const std::string& message, const RunConfig& cfg)
{
    json e = {{"error", kind}, {"message", message}, {"command", cfg.command}};
    if (!cfg.target.empty()) e["target"] = cfg.target;
    err << e.dump() << "\n";
}

/// Builds the artifact for `cfg`; throws prox::Error on failure.
inline io::Table build_table(const RunConfig& cfg, std::ostream& warnings)
{
    const bool sweep = cfg.command == "sweep";
    if (sweep && cfg.target.empty()) throw PreconditionError("sweep: missing target command");
    const CommandSpec& spec = find_command(sweep ? cfg.target : cfg.command);
    if (sweep && !spec.sweepable) throw PreconditionError("sweep: '" + spec.name + "' cannot be swept");
    if (cfg.output_format != "csv" && cfg.output_format != "json") {
        throw PreconditionError("--format must be csv or json");
    }
    if (cfg.jobs < 1 || cfg.jobs > 256) throw PreconditionError("--jobs must lie in [1, 256]");

    halfline::ThetaMemo memo;
    const Context ctx = make_context(cfg, spec, &memo);
    const auto points = expand(spec, cfg.parameters, sweep);

    std::optional<io::Cache> cache;
    if (spec.cacheable) {
        cache = io::Cache::open(cfg.cache_dir);
    }
    const json tol_rec = tolerance_record(ctx);
    const json grid_rec = grid_record(ctx);
    std::atomic<int> hits{0}, misses{0};

    std::vector<Result> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    const auto evaluate = [&](std::size_t i) {
        try {
            std::string key;
            if (cache) {
                key = io::Cache::key(spec.name, points[i].as_json(), {{"tolerances", tol_rec}, {"grid", grid_rec}});
                if (auto hit = cache->get(key)) {
                    try {
                        results[i] = result_from_json(json::parse(hit->value), spec.columns.size());
                        ++hits;
                        return;
                    } catch (const std::exception& ex) {
                        warnings << "warning: ignoring unusable cache entry " << key << ": " << ex.what() << "\n";
                    }
                }
            }
            results[i] = spec.eval(points[i], ctx);
            if (cache) {
                ++misses;
                cache->put(key, result_to_json(results[i]).dump());
            }
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), points.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) evaluate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < points.size(); i = next++) evaluate(i);
            });
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    io::Table t;
    t.columns = spec.columns;
    json params = json::object();
    for (const auto& [k, v] : cfg.parameters) params[k] = v;
    t.meta = {{"tool", "prox"},
              {"version", library_version},
              {"solver_revision", solver_revision},
              {"command", sweep ? "sweep " + spec.name : spec.name},
              {"parameters", params},
              {"tolerances", tol_rec},
              {"grid", grid_rec},
              {"created", io::utc_timestamp()}};
    if (cache) t.meta["cache"] = {{"dir", cache->dir().string()}, {"hits", hits.load()}, {"misses", misses.load()}};
    for (const auto& r : results) {
        for (const auto& row : r.rows) t.add_row(row);
    }
    if (!sweep && !results.empty() && !results.front().summary.is_null()) t.meta["summary"] = results.front().summary;
    return t;
}

inline std::string render(const io::Table& t, const std::string& format)
{
    return format == "json" ? io::to_json(t) : io::to_csv(t);
}

/// Executes `cfg`, writing the artifact to cfg.output_path or `out`. Errors go to `err` as one JSON record.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        const io::Table t = build_table(cfg, err);
        const std::string text = render(t, cfg.output_format);
        if (cfg.output_path) {
            std::ofstream f(*cfg.output_path, std::ios::binary | std::ios::trunc);
            if (!f) throw Error("io", "cannot open output file " + cfg.output_path->string());
            f << text;
            f.flush();
            if (!f) throw Error("io", "write failed for " + cfg.output_path->string());
        } else {
            out << text;
            out.flush();
        }
        if (cfg.command == "validate") {
            const auto pass = std::find(t.columns.begin(), t.columns.end(), "pass") - t.columns.begin();
            for (const auto& row : t.rows) {
                if (!row[static_cast<std::size_t>(pass)].get<bool>()) return static_cast<int>(Exit::failed_checks);
            }
        }
        return static_cast<int>(Exit::ok);
    } catch (const Error& e) {
        write_error(err, e.kind(), e.what(), cfg);
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        write_error(err, "internal", e.what(), cfg);
        return static_cast<int>(Exit::numerical);
    }
}

} // namespace prox::cli
