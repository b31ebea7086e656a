// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "prox/cli/args.hpp"
#include "prox/cli/run.hpp"

int main(int argc, char** argv)
{
    prox::cli::ArgParser parser;
    prox::cli::RunConfig cfg;
    try {
        cfg = parser.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return parser.app().exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return parser.app().exit(e);
    } catch (const CLI::CallForVersion& e) {
        return parser.app().exit(e);
    } catch (const CLI::ParseError& e) {
        prox::cli::write_error(std::cerr, "usage", e.what(), cfg);
        return static_cast<int>(prox::cli::Exit::usage);
    }
    return prox::cli::run(cfg, std::cout, std::cerr);
}
