// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prox/cli/run.hpp"

/// Command-line parsing into a RunConfig.
namespace prox::cli {

class ArgParser {
public:
    ArgParser() : app_("Spectral toolkit for proximity-effect critical fields", "prox")
    {
        app_.require_subcommand(1);
        app_.set_version_flag("--version", library_version);
        for (const auto& spec : commands()) add_leaf(app_, spec, false);
        auto* sweep = app_.add_subcommand("sweep", "Evaluate a command over ranges lo:hi:log|lin:n or comma lists");
        sweep->require_subcommand(1);
        for (const auto& spec : commands()) {
            if (spec.sweepable) add_leaf(*sweep, spec, true);
        }
    }

    CLI::App& app() { return app_; }

    /// Throws CLI::ParseError (including help and version requests).
    RunConfig parse(int argc, const char* const* argv)
    {
        app_.parse(argc, argv);
        for (const auto& leaf : leaves_) {
            if (!leaf.sub->parsed()) continue;
            RunConfig cfg = *leaf.config;
            cfg.command = leaf.sweep ? "sweep" : leaf.name;
            if (leaf.sweep) cfg.target = leaf.name;
            for (const auto& [k, v] : *leaf.values) {
                if (leaf.sub->count("--" + k) > 0) cfg.parameters[k] = v;
            }
            if (leaf.sub->count("--output") > 0) cfg.output_path = *leaf.output;
            if (leaf.sub->count("--cache-dir") > 0) cfg.cache_dir = *leaf.cache_dir;
            if (leaf.sub->count("--tol") > 0) cfg.tolerances["tol"] = *leaf.tol;
            if (leaf.sub->count("--grid-h") > 0) cfg.tolerances["h"] = *leaf.h;
            return cfg;
        }
        throw CLI::RequiredError("a command");
    }

private:
    struct Leaf {
        std::string name;
        bool sweep = false;
        CLI::App* sub = nullptr;
        std::shared_ptr<std::map<std::string, std::string>> values;
        std::shared_ptr<RunConfig> config;
        std::shared_ptr<std::string> output, cache_dir;
        std::shared_ptr<double> tol, h;
    };

    void add_leaf(CLI::App& parent, const CommandSpec& spec, bool sweep)
    {
        Leaf leaf;
        leaf.name = spec.name;
        leaf.sweep = sweep;
        leaf.sub = parent.add_subcommand(spec.name, spec.help);
        leaf.values = std::make_shared<std::map<std::string, std::string>>();
        leaf.config = std::make_shared<RunConfig>();
        leaf.output = std::make_shared<std::string>();
        leaf.cache_dir = std::make_shared<std::string>();
        leaf.tol = std::make_shared<double>(0.0);
        leaf.h = std::make_shared<double>(0.0);
        for (const auto& p : spec.params) {
            std::string help = p.help;
            if (p.fallback) help += " (default " + *p.fallback + ")";
            else if (!p.optional) help += " (required)";
            leaf.sub->add_option("--" + p.name, (*leaf.values)[p.name], help);
        }
        leaf.sub->add_option("--format", leaf.config->output_format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        leaf.sub->add_option("--output", *leaf.output, "write the artifact here instead of stdout");
        leaf.sub->add_option("--cache-dir", *leaf.cache_dir, "result cache directory (PROX_CACHE_DIR overrides)");
        leaf.sub->add_option("--tol", *leaf.tol, "root / convergence tolerance");
        leaf.sub->add_option("--grid-h", *leaf.h, "base grid spacing of the eigensolves");
        if (sweep) {
            leaf.sub->add_option("--jobs", leaf.config->jobs, "concurrent sweep points")
                ->check(CLI::Range(1, 256))
                ->capture_default_str();
        }
        leaves_.push_back(std::move(leaf));
    }

    CLI::App app_;
    std::vector<Leaf> leaves_;
};

} // namespace prox::cli
