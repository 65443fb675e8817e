// runner.hpp — subcommand dispatch for the sqzcoh tool

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqz/config.hpp"

namespace sqz::cli {

enum class Subcommand { Spectra, SteadyState, Dynamics, Timescales, Zeno, Sustainability, Sweep };

std::optional<Subcommand> parse_subcommand(std::string_view name);
std::string_view subcommand_name(Subcommand cmd);

struct RunResult {
    std::string csv;
    int exit_code{0};                   // 0 ok, 2 every point failed
    std::vector<std::string> warnings;
    std::size_t points{0};
    std::size_t failed_points{0};
};

// Per-point failures land in the `status` column. Throws ConfigError when the
// configuration cannot drive the subcommand at all (e.g. `zeno` without tau_m).
RunResult run(Subcommand cmd, const RunConfig& cfg);

}  // namespace sqz::cli
