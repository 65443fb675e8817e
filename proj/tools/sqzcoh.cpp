// sqzcoh.cpp — command-line front end
//
//   sqzcoh <subcommand> --config <path> [--out <path>] [--quiet]
//
// Exit codes: 0 success, 1 configuration error, 2 every point failed.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sqz/config.hpp"
#include "sqz/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Two-level atom in a finite-bandwidth squeezed vacuum"};
    std::string subcommand;
    std::string config_path;
    std::string out_path;
    bool quiet = false;
    app.add_option("subcommand", subcommand,
                   "spectra | steady-state | dynamics | timescales | zeno | sustainability | sweep")
        ->required();
    app.add_option("--config", config_path, "key = value configuration file")->required();
    app.add_option("--out", out_path, "write CSV here instead of stdout");
    app.add_flag("--quiet", quiet, "suppress warnings on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const auto cmd = sqz::cli::parse_subcommand(subcommand);
    if (!cmd) {
        std::cerr << "sqzcoh: unknown subcommand '" << subcommand << "'\n";
        return 1;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "sqzcoh: cannot read " << config_path << "\n";
        return 1;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    sqz::cli::RunResult result;
    try {
        const sqz::cli::RunConfig cfg = sqz::cli::parse_config(buffer.str());
        result = sqz::cli::run(*cmd, cfg);
    } catch (const sqz::cli::ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "sqzcoh: " << e.what() << "\n";
        return 2;
    }

    if (!quiet)
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

    if (out_path.empty()) {
        std::cout << result.csv;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "sqzcoh: cannot write " << out_path << "\n";
            return 2;
        }
        out << result.csv;
    }
    if (result.exit_code != 0 && !quiet)
        std::cerr << "sqzcoh: all " << result.points << " point(s) failed\n";
    return result.exit_code;
}
