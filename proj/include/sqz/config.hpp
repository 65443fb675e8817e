// config.hpp — flat key = value run configuration for the sqzcoh tool
//
// One `key = value` per line, `#` starts a comment. Unknown or repeated keys
// are rejected. `gamma` and `Omega` are required; everything else has a
// default. A sweep is a single line
//
//     sweep = <param> <start> <stop> <count> [log]

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqz/bath_spectra.hpp"
#include "sqz/dynamics.hpp"
#include "sqz/effective_params.hpp"
#include "sqz/zeno.hpp"

namespace sqz::cli {

struct ConfigError : std::runtime_error {
    ConfigError(std::size_t line, const std::string& message);
    std::size_t line;  // 0 when the problem is not tied to a line
};

enum class Spacing { Linear, Log };

struct SweepSpec {
    std::string parameter;
    double start{0.0};
    double stop{1.0};
    std::size_t count{2};
    Spacing spacing{Spacing::Linear};

    std::vector<double> points() const;
};

struct Tolerances {
    double integrator_abs{1e-10};
    double integrator_rel{1e-8};
    double quadrature_rel{1e-13};
};

enum class DynamicsMethod { Bloch, Master };

struct DynamicsSettings {
    double t_final{0.0};  // 0 = 20/γ
    std::size_t samples{200};
    double fixed_step{0.0};
    DynamicsMethod method{DynamicsMethod::Bloch};
    BlochState initial{};
};

struct SpectraGrid {
    std::optional<double> x_min;  // default −10γ
    std::optional<double> x_max;  // default +10γ
    std::size_t count{201};
};

struct RunConfig {
    AtomConfig atom;
    BathConfig bath;
    bool phase_omega_explicit{false};   // linear phase Ω given separately from the Rabi frequency
    std::optional<MeasurementWindow> measurement;
    std::optional<double> gamma_override;
    std::optional<SweepSpec> sweep;
    std::vector<std::string> outputs;
    Tolerances tolerances;
    DynamicsSettings dynamics;
    SpectraGrid spectra;
    bool gamma_units{false};
    std::size_t threads{1};

    bool wants(std::string_view output) const;
};

// Throws ConfigError carrying the offending line number.
RunConfig parse_config(std::string_view text);

// Copy of `cfg` with one sweepable parameter replaced. Throws InvalidParameter
// if the result violates a model invariant.
RunConfig with_parameter(const RunConfig& cfg, std::string_view name, double value);

// Current value of a sweepable parameter.
double parameter_value(const RunConfig& cfg, std::string_view name);

bool is_sweepable(std::string_view name);

}  // namespace sqz::cli
