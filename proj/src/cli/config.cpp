// config.cpp

#include "sqz/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "sqz/errors.hpp"

namespace sqz::cli {

namespace {

enum class Dim { Frequency, Time, Dimensionless, None };

struct KeyInfo {
    std::string_view name;
    Dim dim;
    bool sweepable;
};

constexpr std::array kKeys{
    KeyInfo{"gamma", Dim::Frequency, true},
    KeyInfo{"epsilon", Dim::Frequency, true},
    KeyInfo{"omega_L", Dim::Frequency, false},
    KeyInfo{"phase_model", Dim::None, false},
    KeyInfo{"phi", Dim::Dimensionless, true},
    KeyInfo{"phase_omega", Dim::Frequency, true},
    KeyInfo{"delta_N", Dim::Dimensionless, true},
    KeyInfo{"delta_M", Dim::Dimensionless, true},
    KeyInfo{"Omega", Dim::Frequency, true},
    KeyInfo{"omega_A", Dim::Frequency, false},
    KeyInfo{"Delta", Dim::Frequency, true},
    KeyInfo{"xi_abs", Dim::Frequency, true},
    KeyInfo{"tau_m", Dim::Time, true},
    KeyInfo{"t_i", Dim::Time, false},
    KeyInfo{"k_delta_E", Dim::Frequency, true},
    KeyInfo{"Gamma_override", Dim::Frequency, true},
    KeyInfo{"sweep", Dim::None, false},
    KeyInfo{"outputs", Dim::None, false},
    KeyInfo{"integrator_abs_tol", Dim::None, false},
    KeyInfo{"integrator_rel_tol", Dim::None, false},
    KeyInfo{"quadrature_rel_tol", Dim::None, false},
    KeyInfo{"fixed_step", Dim::Time, false},
    KeyInfo{"t_final", Dim::Time, false},
    KeyInfo{"samples", Dim::None, false},
    KeyInfo{"dynamics_method", Dim::None, false},
    KeyInfo{"sigma_z0", Dim::None, false},
    KeyInfo{"sigma_minus0_re", Dim::None, false},
    KeyInfo{"sigma_minus0_im", Dim::None, false},
    KeyInfo{"x_min", Dim::Frequency, false},
    KeyInfo{"x_max", Dim::Frequency, false},
    KeyInfo{"x_count", Dim::None, false},
    KeyInfo{"units", Dim::None, false},
    KeyInfo{"threads", Dim::None, false},
};

constexpr std::array kOutputs{std::string_view{"timescales"}, std::string_view{"sustainability"},
                              std::string_view{"zeno"}, std::string_view{"steady_state"}};

const KeyInfo* find_key(std::string_view name) {
    for (const auto& k : kKeys)
        if (k.name == name) return &k;
    return nullptr;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_words(std::string_view s, std::string_view seps = " \t") {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto start = s.find_first_not_of(seps, pos);
        if (start == std::string_view::npos) break;
        const auto end = s.find_first_of(seps, start);
        out.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        pos = end == std::string_view::npos ? s.size() : end;
    }
    return out;
}

double parse_double(std::string_view s, std::size_t line, std::string_view key) {
    double v = 0.0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    if (!s.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ConfigError(line, std::string(key) + ": expected a finite number, got '" + std::string(s) + "'");
    return v;
}

std::size_t parse_count(std::string_view s, std::size_t line, std::string_view key) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(line, std::string(key) + ": expected a non-negative integer, got '" + std::string(s) + "'");
    return v;
}

struct Entry {
    std::string value;
    std::size_t line;
};

using Entries = std::map<std::string, Entry, std::less<>>;

// Rescales every dimensional quantity so that γ = 1.
void to_gamma_units(RunConfig& cfg) {
    const double g = cfg.bath.gamma;
    const auto freq = [g](double& v) { v /= g; };
    const auto time = [g](double& v) { v *= g; };

    freq(cfg.bath.epsilon);
    if (cfg.bath.omega_L) freq(*cfg.bath.omega_L);
    if (auto* lin = std::get_if<LinearPhase>(&cfg.bath.phase_model)) freq(lin->omega);
    freq(cfg.atom.omega_rabi);
    if (cfg.atom.omega_A) freq(*cfg.atom.omega_A);
    freq(cfg.atom.delta);
    freq(cfg.atom.xi_abs);
    if (cfg.measurement) {
        time(cfg.measurement->t_i);
        time(cfg.measurement->t_f);
        freq(cfg.measurement->k_delta_E);
    }
    if (cfg.gamma_override) freq(*cfg.gamma_override);
    time(cfg.dynamics.t_final);
    time(cfg.dynamics.fixed_step);
    if (cfg.spectra.x_min) freq(*cfg.spectra.x_min);
    if (cfg.spectra.x_max) freq(*cfg.spectra.x_max);
    if (cfg.sweep) {
        const KeyInfo* info = find_key(cfg.sweep->parameter);
        if (info->dim == Dim::Frequency) {
            freq(cfg.sweep->start);
            freq(cfg.sweep->stop);
        } else if (info->dim == Dim::Time) {
            time(cfg.sweep->start);
            time(cfg.sweep->stop);
        }
    }
    cfg.bath.gamma = 1.0;
}

SweepSpec parse_sweep(std::string_view value, std::size_t line) {
    const auto words = split_words(value);
    if (words.size() != 4 && words.size() != 5)
        throw ConfigError(line, "sweep: expected '<param> <start> <stop> <count> [log]'");
    SweepSpec s;
    s.parameter = std::string(words[0]);
    if (!is_sweepable(s.parameter)) throw ConfigError(line, "sweep: parameter '" + s.parameter + "' cannot be swept");
    s.start = parse_double(words[1], line, "sweep start");
    s.stop = parse_double(words[2], line, "sweep stop");
    s.count = parse_count(words[3], line, "sweep count");
    if (words.size() == 5) {
        if (words[4] != "log") throw ConfigError(line, "sweep: spacing must be 'log' when given");
        s.spacing = Spacing::Log;
    }
    if (s.count < 2) throw ConfigError(line, "sweep: count must be >= 2");
    if (!(s.start < s.stop)) throw ConfigError(line, "sweep: start must be < stop");
    if (s.spacing == Spacing::Log && !(s.start > 0.0)) throw ConfigError(line, "sweep: log spacing needs start > 0");
    return s;
}

}  // namespace

ConfigError::ConfigError(std::size_t line_no, const std::string& message)
    : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + message : message), line(line_no) {}

std::vector<double> SweepSpec::points() const {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(count - 1);
        if (spacing == Spacing::Log) {
            out[k] = std::exp(std::log(start) + f * (std::log(stop) - std::log(start)));
        } else {
            out[k] = start + f * (stop - start);
        }
    }
    out.front() = start;
    out.back() = stop;
    return out;
}

bool RunConfig::wants(std::string_view output) const {
    return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

bool is_sweepable(std::string_view name) {
    const KeyInfo* info = find_key(name);
    return info != nullptr && info->sweepable;
}

RunConfig parse_config(std::string_view text) {
    Entries entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "missing key before '='");
        if (find_key(key) == nullptr) throw ConfigError(line_no, "unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(line_no, key + ": missing value");
        if (entries.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
        entries.emplace(key, Entry{std::string(value), line_no});
    }

    const auto line_of = [&](std::string_view key) -> std::size_t {
        const auto it = entries.find(key);
        return it == entries.end() ? 0 : it->second.line;
    };
    const auto number = [&](std::string_view key) -> std::optional<double> {
        const auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return parse_double(it->second.value, it->second.line, key);
    };
    const auto count = [&](std::string_view key) -> std::optional<std::size_t> {
        const auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return parse_count(it->second.value, it->second.line, key);
    };
    const auto word = [&](std::string_view key) -> std::optional<std::string> {
        const auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return it->second.value;
    };

    for (const char* required : {"gamma", "Omega"})
        if (!entries.count(required)) throw ConfigError(0, std::string("missing required key '") + required + "'");

    RunConfig cfg;
    cfg.bath.gamma = *number("gamma");
    cfg.bath.epsilon = number("epsilon").value_or(0.0);
    cfg.bath.omega_L = number("omega_L");
    cfg.bath.delta_N = number("delta_N").value_or(0.0);
    cfg.bath.delta_M = number("delta_M").value_or(0.0);
    cfg.atom.omega_rabi = *number("Omega");
    cfg.atom.omega_A = number("omega_A");
    cfg.atom.xi_abs = number("xi_abs").value_or(0.0);

    if (const auto delta = number("Delta")) {
        cfg.atom.delta = *delta;
    } else if (cfg.atom.omega_A && cfg.bath.omega_L) {
        cfg.atom.delta = *cfg.bath.omega_L - *cfg.atom.omega_A;
    }

    const double phi = number("phi").value_or(0.0);
    const std::string model = word("phase_model").value_or("constant");
    const auto phase_omega = number("phase_omega");
    if (model == "constant") {
        if (phase_omega) throw ConfigError(line_of("phase_omega"), "phase_omega only applies to phase_model = linear");
        cfg.bath.phase_model = ConstantPhase{phi};
    } else if (model == "linear") {
        cfg.phase_omega_explicit = phase_omega.has_value();
        cfg.bath.phase_model = LinearPhase{phi, phase_omega.value_or(cfg.atom.omega_rabi)};
    } else {
        throw ConfigError(line_of("phase_model"), "phase_model must be 'constant' or 'linear'");
    }

    const auto tau_m = number("tau_m");
    const auto t_i = number("t_i");
    const auto k_delta_E = number("k_delta_E");
    if (tau_m) {
        if (!(*tau_m > 0.0)) throw ConfigError(line_of("tau_m"), "tau_m must be > 0");
        cfg.measurement = MeasurementWindow{t_i.value_or(0.0), t_i.value_or(0.0) + *tau_m, k_delta_E.value_or(0.0)};
    } else if (t_i || k_delta_E) {
        throw ConfigError(line_of(t_i ? "t_i" : "k_delta_E"), "t_i and k_delta_E require tau_m");
    }
    cfg.gamma_override = number("Gamma_override");
    if (cfg.gamma_override && *cfg.gamma_override < 0.0)
        throw ConfigError(line_of("Gamma_override"), "Gamma_override must be >= 0");

    if (const auto it = entries.find("sweep"); it != entries.end())
        cfg.sweep = parse_sweep(it->second.value, it->second.line);
    if (const auto it = entries.find("outputs"); it != entries.end()) {
        for (const auto w : split_words(it->second.value, " \t,")) {
            if (std::find(kOutputs.begin(), kOutputs.end(), w) == kOutputs.end())
                throw ConfigError(it->second.line, "outputs: unknown quantity '" + std::string(w) + "'");
            cfg.outputs.emplace_back(w);
        }
    }

    cfg.tolerances.integrator_abs = number("integrator_abs_tol").value_or(cfg.tolerances.integrator_abs);
    cfg.tolerances.integrator_rel = number("integrator_rel_tol").value_or(cfg.tolerances.integrator_rel);
    cfg.tolerances.quadrature_rel = number("quadrature_rel_tol").value_or(cfg.tolerances.quadrature_rel);
    for (const char* key : {"integrator_abs_tol", "integrator_rel_tol", "quadrature_rel_tol"}) {
        if (const auto v = number(key); v && !(*v > 0.0)) throw ConfigError(line_of(key), std::string(key) + " must be > 0");
    }

    cfg.dynamics.t_final = number("t_final").value_or(0.0);
    if (entries.count("t_final") && !(cfg.dynamics.t_final > 0.0)) throw ConfigError(line_of("t_final"), "t_final must be > 0");
    cfg.dynamics.fixed_step = number("fixed_step").value_or(0.0);
    if (entries.count("fixed_step") && !(cfg.dynamics.fixed_step > 0.0))
        throw ConfigError(line_of("fixed_step"), "fixed_step must be > 0");
    cfg.dynamics.samples = count("samples").value_or(cfg.dynamics.samples);
    if (cfg.dynamics.samples < 1) throw ConfigError(line_of("samples"), "samples must be >= 1");
    if (const auto m = word("dynamics_method")) {
        if (*m == "bloch") cfg.dynamics.method = DynamicsMethod::Bloch;
        else if (*m == "master") cfg.dynamics.method = DynamicsMethod::Master;
        else throw ConfigError(line_of("dynamics_method"), "dynamics_method must be 'bloch' or 'master'");
    }
    cfg.dynamics.initial.sigma_z = number("sigma_z0").value_or(-1.0);
    const cplx s0{number("sigma_minus0_re").value_or(0.0), number("sigma_minus0_im").value_or(0.0)};
    cfg.dynamics.initial.sigma_minus = s0;
    cfg.dynamics.initial.sigma_plus = std::conj(s0);
    if (!is_physical(cfg.dynamics.initial, 0.0) ||
        std::norm(s0) > 0.25 * (1.0 - cfg.dynamics.initial.sigma_z * cfg.dynamics.initial.sigma_z) + 1e-15)
        throw ConfigError(line_of("sigma_z0"), "initial Bloch state is not a valid density matrix");

    cfg.spectra.x_min = number("x_min");
    cfg.spectra.x_max = number("x_max");
    cfg.spectra.count = count("x_count").value_or(cfg.spectra.count);
    if (cfg.spectra.count < 2) throw ConfigError(line_of("x_count"), "x_count must be >= 2");

    if (const auto u = word("units")) {
        if (*u == "gamma") cfg.gamma_units = true;
        else if (*u != "raw") throw ConfigError(line_of("units"), "units must be 'raw' or 'gamma'");
    }
    cfg.threads = count("threads").value_or(1);
    if (cfg.threads < 1) throw ConfigError(line_of("threads"), "threads must be >= 1");

    // Model invariants, reported against the line that broke them.
    if (!(cfg.bath.gamma > 0.0)) throw ConfigError(line_of("gamma"), "gamma must be > 0");
    if (cfg.bath.epsilon < 0.0) throw ConfigError(line_of("epsilon"), "epsilon must be >= 0");
    if (!(cfg.bath.epsilon < 0.5 * cfg.bath.gamma))
        throw ConfigError(line_of("epsilon"), "epsilon must be below the amplification threshold gamma/2");
    if (const auto* lin = std::get_if<LinearPhase>(&cfg.bath.phase_model); lin && !(lin->omega > 0.0))
        throw ConfigError(cfg.phase_omega_explicit ? line_of("phase_omega") : line_of("Omega"),
                          "linear phase model requires Omega > 0");
    if (cfg.atom.omega_rabi < 0.0) throw ConfigError(line_of("Omega"), "Omega must be >= 0");
    if (cfg.atom.xi_abs < 0.0) throw ConfigError(line_of("xi_abs"), "xi_abs must be >= 0");
    try {
        validate(cfg.atom, cfg.bath);
    } catch (const InvalidParameter& e) {
        throw ConfigError(line_of("Delta") ? line_of("Delta") : line_of("omega_A"), e.what());
    }
    if (cfg.sweep && cfg.gamma_units && cfg.sweep->parameter == "gamma")
        throw ConfigError(line_of("sweep"), "sweep over gamma is not meaningful with units = gamma");
    if (cfg.gamma_units) to_gamma_units(cfg);
    return cfg;
}

double parameter_value(const RunConfig& cfg, std::string_view name) {
    if (name == "gamma") return cfg.bath.gamma;
    if (name == "epsilon") return cfg.bath.epsilon;
    if (name == "delta_N") return cfg.bath.delta_N;
    if (name == "delta_M") return cfg.bath.delta_M;
    if (name == "Omega") return cfg.atom.omega_rabi;
    if (name == "Delta") return cfg.atom.delta;
    if (name == "xi_abs") return cfg.atom.xi_abs;
    if (name == "phi") {
        if (const auto* lin = std::get_if<LinearPhase>(&cfg.bath.phase_model)) return lin->phi_atomic;
        return std::get<ConstantPhase>(cfg.bath.phase_model).phi0;
    }
    if (name == "phase_omega") {
        if (const auto* lin = std::get_if<LinearPhase>(&cfg.bath.phase_model)) return lin->omega;
        return 0.0;
    }
    if (name == "tau_m") return cfg.measurement ? cfg.measurement->tau_m() : 0.0;
    if (name == "k_delta_E") return cfg.measurement ? cfg.measurement->k_delta_E : 0.0;
    if (name == "Gamma_override") return cfg.gamma_override.value_or(0.0);
    throw InvalidParameter("unknown parameter '" + std::string(name) + "'");
}

RunConfig with_parameter(const RunConfig& cfg, std::string_view name, double value) {
    RunConfig out = cfg;
    auto* lin = std::get_if<LinearPhase>(&out.bath.phase_model);
    if (name == "gamma") out.bath.gamma = value;
    else if (name == "epsilon") out.bath.epsilon = value;
    else if (name == "delta_N") out.bath.delta_N = value;
    else if (name == "delta_M") out.bath.delta_M = value;
    else if (name == "Omega") {
        out.atom.omega_rabi = value;
        if (lin && !out.phase_omega_explicit) lin->omega = value;
    } else if (name == "Delta") {
        out.atom.delta = value;
        out.atom.omega_A.reset();
    } else if (name == "xi_abs") out.atom.xi_abs = value;
    else if (name == "phi") {
        if (lin) lin->phi_atomic = value;
        else out.bath.phase_model = ConstantPhase{value};
    } else if (name == "phase_omega") {
        if (!lin) throw InvalidParameter("phase_omega requires phase_model = linear");
        lin->omega = value;
        out.phase_omega_explicit = true;
    } else if (name == "tau_m") {
        if (!(value > 0.0)) throw InvalidParameter("tau_m must be > 0");
        const double t_i = out.measurement ? out.measurement->t_i : 0.0;
        const double k = out.measurement ? out.measurement->k_delta_E : 0.0;
        out.measurement = MeasurementWindow{t_i, t_i + value, k};
    } else if (name == "k_delta_E") {
        if (!out.measurement) throw InvalidParameter("k_delta_E requires tau_m");
        out.measurement->k_delta_E = value;
    } else if (name == "Gamma_override") {
        if (value < 0.0) throw InvalidParameter("Gamma_override must be >= 0");
        out.gamma_override = value;
    } else {
        throw InvalidParameter("parameter '" + std::string(name) + "' cannot be swept");
    }
    validate(out.atom, out.bath);
    return out;
}

}  // namespace sqz::cli
