// runner.cpp

#include "sqz/runner.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "sqz/coherence.hpp"
#include "sqz/csv.hpp"
#include "sqz/dynamics.hpp"
#include "sqz/effective_params.hpp"
#include "sqz/errors.hpp"
#include "sqz/sustainability.hpp"
#include "sqz/zeno.hpp"

namespace sqz::cli {

namespace {

using Row = std::vector<std::string>;
using Columns = std::vector<std::string>;

const Columns kTimescaleColumns{"gamma", "epsilon", "Omega", "Delta", "phi", "delta_N", "delta_M", "xi_abs",
                                "Gamma", "tau_C", "tau_D", "ratio", "d", "ImM_tilde", "tau_m", "alpha"};
const Columns kSustainabilityColumns{"phi_star", "phi_companion", "zeta", "omega_tilde_required", "feasible",
                                     "residual"};
const Columns kZenoColumns{"Gamma", "tau_m", "tau_D_exact", "tau_D_frequent", "ratio", "sustainable"};
const Columns kZenoExtraColumns{"tau_D_exact", "tau_D_frequent", "sustainable"};
const Columns kSteadyStateColumns{"n_tilde", "re_M_tilde", "im_M_tilde", "delta_eff", "re_beta", "im_beta", "d",
                                  "sigma_z_ss", "re_sigma_minus_ss", "im_sigma_minus_ss", "sigma_z_numeric",
                                  "re_sigma_minus_numeric", "im_sigma_minus_numeric", "physical", "margin"};
// The timescales table already carries d.
const Columns kSteadyStateExtraColumns{"n_tilde", "re_M_tilde", "im_M_tilde", "delta_eff", "re_beta", "im_beta",
                                       "sigma_z_ss", "re_sigma_minus_ss", "im_sigma_minus_ss", "sigma_z_numeric",
                                       "re_sigma_minus_numeric", "im_sigma_minus_numeric", "physical", "margin"};
const Columns kDynamicsColumns{"t", "re_sigma_minus", "im_sigma_minus", "sigma_z", "trace", "min_eigenvalue"};
const Columns kSpectraColumns{"x", "N", "M_abs"};

std::string fmt(double v) { return format_double(v); }
std::string fmt(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

Row blank(std::size_t n) { return Row(n); }

void append(Row& row, const Row& more) { row.insert(row.end(), more.begin(), more.end()); }

struct PointOutput {
    std::vector<Row> rows;  // without the sweep column
    std::vector<std::string> warnings;
    bool failed{false};
};

std::string error_status(const std::exception& e) { return std::string("error: ") + e.what(); }

// ---------------------------------------------------------------------------
// Row builders. Each returns cells for its column group or throws.

Row timescale_cells(const RunConfig& cfg, const EffectiveParams& p, const TimescaleReport& r) {
    return {fmt(cfg.bath.gamma), fmt(cfg.bath.epsilon), fmt(cfg.atom.omega_rabi), fmt(cfg.atom.delta),
            fmt(p.phi), fmt(cfg.bath.delta_N), fmt(cfg.bath.delta_M), fmt(cfg.atom.xi_abs),
            fmt(r.gamma_decay), fmt(r.tau_C), fmt(r.tau_D), fmt(r.ratio), fmt(r.d), fmt(r.im_m_tilde),
            cfg.measurement ? fmt(cfg.measurement->tau_m()) : std::string{}, fmt(r.alpha)};
}

Row timescale_inputs_only(const RunConfig& cfg) {
    Row row = blank(kTimescaleColumns.size());
    row[0] = fmt(cfg.bath.gamma);
    row[1] = fmt(cfg.bath.epsilon);
    row[2] = fmt(cfg.atom.omega_rabi);
    row[3] = fmt(cfg.atom.delta);
    row[5] = fmt(cfg.bath.delta_N);
    row[6] = fmt(cfg.bath.delta_M);
    row[7] = fmt(cfg.atom.xi_abs);
    if (cfg.measurement) row[14] = fmt(cfg.measurement->tau_m());
    return row;
}

TimescaleReport timescale_report(const RunConfig& cfg, const EffectiveParams& p) {
    TimescaleReport r = coherence_time_squeezed(cfg.atom, cfg.bath, p);
    if (cfg.gamma_override) {
        r.gamma_decay = *cfg.gamma_override;
        r.tau_C = coherence_time(r.gamma_decay);
        r.gain = false;
    }
    if (cfg.measurement) r = with_dwell_time(r, cfg.measurement->tau_m());
    return r;
}

bool linear_condition_applies(const RunConfig& cfg) {
    return std::holds_alternative<LinearPhase>(cfg.bath.phase_model) && cfg.bath.delta_M > 0.0;
}

Row sustainability_cells(const RunConfig& cfg, std::vector<std::string>& warnings, bool& degenerate) {
    SustainabilitySolution s = linear_condition_applies(cfg) ? omega_tilde_condition(cfg.atom, cfg.bath)
                                                             : solve_phi_closed_form(cfg.atom, cfg.bath);
    degenerate = s.status == SolutionStatus::Degenerate;
    const bool linear = linear_condition_applies(cfg);
    if (linear && std::abs(s.phi_star) > 0.1)
        warnings.push_back("|phi*| = " + fmt(std::abs(s.phi_star)) +
                           " rad exceeds 0.1; the small-angle Omega~ condition is unreliable");
    return {fmt(s.phi_star), fmt(s.phi_companion), fmt(s.zeta),
            linear ? fmt(s.omega_tilde_required) : std::string{}, linear ? format_bool(s.feasible) : std::string{},
            fmt(s.residual)};
}

Row zeno_extra_cells(const TimescaleReport& r, const RunConfig& cfg) {
    if (!cfg.measurement || r.gain) return blank(kZenoExtraColumns.size());
    const double tau_m = cfg.measurement->tau_m();
    return {fmt(dwell_time_weak(r.gamma_decay, tau_m)), fmt(dwell_time_frequent(r.gamma_decay, tau_m)),
            format_bool(coherence_dwell_ratio(r.gamma_decay, tau_m).sustainable)};
}

Row steady_state_cells(const RunConfig& cfg, const EffectiveParams& p, std::vector<std::string>& warnings,
                       bool with_d = true) {
    const SteadyState a = steady_state_analytic(p, cfg.atom, cfg.bath);
    const SteadyState n = steady_state_numeric(p, cfg.atom, cfg.bath);
    const PhysicalityCheck pc = physicality_check(p);
    if (!pc.physical)
        warnings.push_back("squeezing bound |M~|^2 <= N~(N~+1) violated (margin " + fmt(pc.margin) + ")");
    Row row{fmt(p.n_tilde), fmt(p.m_tilde.real()), fmt(p.m_tilde.imag()), fmt(p.delta_eff), fmt(p.beta.real()),
            fmt(p.beta.imag()), fmt(p.d), fmt(a.sigma_z_ss), fmt(a.sigma_minus_ss.real()),
            fmt(a.sigma_minus_ss.imag()), fmt(n.sigma_z_ss), fmt(n.sigma_minus_ss.real()),
            fmt(n.sigma_minus_ss.imag()), format_bool(pc.physical), fmt(pc.margin)};
    if (!with_d) row.erase(row.begin() + 6);
    return row;
}

// ---------------------------------------------------------------------------
// Subcommand bodies

Columns columns_for(Subcommand cmd, const RunConfig& cfg) {
    Columns cols;
    const auto add = [&cols](const Columns& more) { cols.insert(cols.end(), more.begin(), more.end()); };
    switch (cmd) {
        case Subcommand::Spectra: add(kSpectraColumns); break;
        case Subcommand::SteadyState: add(kSteadyStateColumns); break;
        case Subcommand::Dynamics: add(kDynamicsColumns); break;
        case Subcommand::Zeno: add(kZenoColumns); break;
        case Subcommand::Sustainability:
            add(kSustainabilityColumns);
            cols.insert(cols.begin() + 2, "phi_star_root");
            break;
        case Subcommand::Timescales:
        case Subcommand::Sweep:
            add(kTimescaleColumns);
            if (cfg.wants("sustainability")) add(kSustainabilityColumns);
            if (cfg.wants("zeno")) add(kZenoExtraColumns);
            if (cfg.wants("steady_state")) add(kSteadyStateExtraColumns);
            break;
    }
    cols.emplace_back("status");
    return cols;
}

PointOutput eval_spectra(const RunConfig& cfg) {
    PointOutput out;
    try {
        const SpectralPair pair = lambda_mu(cfg.bath);
        const double lo = cfg.spectra.x_min.value_or(-10.0 * cfg.bath.gamma);
        const double hi = cfg.spectra.x_max.value_or(10.0 * cfg.bath.gamma);
        const std::size_t n = cfg.spectra.count;
        for (std::size_t k = 0; k < n; ++k) {
            const double x = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
            out.rows.push_back({fmt(x), fmt(spectrum_N(x, pair)), fmt(spectrum_M_abs(x, pair)), "ok"});
        }
    } catch (const std::exception& e) {
        Row row = blank(kSpectraColumns.size());
        row.push_back(error_status(e));
        out.rows = {row};
        out.failed = true;
    }
    return out;
}

PointOutput eval_steady_state(const RunConfig& cfg) {
    PointOutput out;
    try {
        const EffectiveParams p = effective_params(cfg.atom, cfg.bath);
        Row row = steady_state_cells(cfg, p, out.warnings);
        row.push_back("ok");
        out.rows = {row};
    } catch (const std::exception& e) {
        Row row = blank(kSteadyStateColumns.size());
        row.push_back(error_status(e));
        out.rows = {row};
        out.failed = true;
    }
    return out;
}

PointOutput eval_dynamics(const RunConfig& cfg) {
    PointOutput out;
    try {
        const EffectiveParams p = effective_params(cfg.atom, cfg.bath);
        const double t_final = cfg.dynamics.t_final > 0.0 ? cfg.dynamics.t_final : 20.0 / cfg.bath.gamma;
        const std::size_t samples = cfg.dynamics.samples;
        bool warned = false;
        const auto emit = [&](double t, const DensityMatrix& dm) {
            const BlochState m = dm.moments();
            const double min_eig = dm.min_eigenvalue();
            if (min_eig < -1e-6 && !warned) {
                warned = true;
                out.warnings.push_back("density matrix lost positivity (min eigenvalue " + fmt(min_eig) +
                                       ", squeezing margin " + fmt(physicality_check(p).margin) + ")");
            }
            out.rows.push_back({fmt(t), fmt(m.sigma_minus.real()), fmt(m.sigma_minus.imag()), fmt(m.sigma_z),
                                fmt(dm.trace().real()), fmt(min_eig), "ok"});
        };
        if (cfg.dynamics.method == DynamicsMethod::Bloch) {
            IntegratorOptions io;
            io.abs_tol = cfg.tolerances.integrator_abs;
            io.rel_tol = cfg.tolerances.integrator_rel;
            io.fixed_step = cfg.dynamics.fixed_step;
            io.samples = samples;
            for (const auto& pt : integrate_bloch(cfg.dynamics.initial, p, cfg.atom, cfg.bath, t_final, io))
                emit(pt.t, DensityMatrix::from_bloch(pt.state));
        } else {
            const Superoperator L = master_superoperator(p, cfg.atom, cfg.bath);
            const DensityMatrix rho0 = DensityMatrix::from_bloch(cfg.dynamics.initial);
            for (std::size_t k = 0; k <= samples; ++k) {
                const double t = k == samples ? t_final : t_final * static_cast<double>(k) / static_cast<double>(samples);
                emit(t, propagate_density(rho0, L, t).rho);
            }
        }
    } catch (const std::exception& e) {
        Row row = blank(kDynamicsColumns.size());
        row.push_back(error_status(e));
        out.rows = {row};
        out.failed = true;
    }
    return out;
}

PointOutput eval_zeno(const RunConfig& cfg) {
    PointOutput out;
    const double tau_m = cfg.measurement->tau_m();
    try {
        double gamma_decay = 0.0;
        if (cfg.gamma_override) {
            gamma_decay = *cfg.gamma_override;
        } else {
            gamma_decay = coherence_time_squeezed(cfg.atom, cfg.bath).gamma_decay;
        }
        if (gamma_decay < 0.0) {
            Row row = blank(kZenoColumns.size());
            row[0] = fmt(gamma_decay);
            row[1] = fmt(tau_m);
            row.push_back("gain");
            out.rows = {row};
            return out;
        }
        const ZenoRatio zr = coherence_dwell_ratio(gamma_decay, tau_m);
        out.rows = {{fmt(gamma_decay), fmt(tau_m), fmt(dwell_time_weak(gamma_decay, tau_m)),
                     fmt(dwell_time_frequent(gamma_decay, tau_m)), fmt(zr.ratio), format_bool(zr.sustainable), "ok"}};
    } catch (const std::exception& e) {
        Row row = blank(kZenoColumns.size());
        row[1] = fmt(tau_m);
        row.push_back(error_status(e));
        out.rows = {row};
        out.failed = true;
    }
    return out;
}

PointOutput eval_sustainability(const RunConfig& cfg) {
    PointOutput out;
    try {
        bool degenerate = false;
        Row row = sustainability_cells(cfg, out.warnings, degenerate);
        const SustainabilitySolution root = solve_phi_root(cfg.atom, cfg.bath);
        row.insert(row.begin() + 2, degenerate ? std::string{} : fmt(root.phi_star));
        row.push_back(degenerate ? "degenerate" : "ok");
        out.rows = {row};
    } catch (const std::exception& e) {
        Row row = blank(kSustainabilityColumns.size() + 1);
        row.push_back(error_status(e));
        out.rows = {row};
        out.failed = true;
    }
    return out;
}

PointOutput eval_timescales(const RunConfig& cfg) {
    PointOutput out;
    Row row;
    std::string status = "ok";
    EffectiveParams p;
    TimescaleReport r;
    try {
        p = effective_params(cfg.atom, cfg.bath);
        r = timescale_report(cfg, p);
        row = timescale_cells(cfg, p, r);
        if (r.gain) {
            status = "gain";
            out.warnings.push_back("negative decay parameter (gain) at Gamma = " + fmt(r.gamma_decay));
        }
    } catch (const std::exception& e) {
        Row failed = timescale_inputs_only(cfg);
        const std::size_t width = columns_for(Subcommand::Timescales, cfg).size() - failed.size() - 1;
        append(failed, blank(width));
        failed.push_back(error_status(e));
        out.rows = {failed};
        out.failed = true;
        return out;
    }
    // Optional groups fail independently of the core report.
    const auto group = [&](std::size_t width, auto&& build) {
        try {
            append(row, build());
        } catch (const std::exception& e) {
            append(row, blank(width));
            if (status == "ok" || status == "gain") status = error_status(e);
        }
    };
    if (cfg.wants("sustainability")) {
        group(kSustainabilityColumns.size(), [&] {
            bool degenerate = false;
            Row cells = sustainability_cells(cfg, out.warnings, degenerate);
            if (degenerate && status == "ok") status = "degenerate";
            return cells;
        });
    }
    if (cfg.wants("zeno")) group(kZenoExtraColumns.size(), [&] { return zeno_extra_cells(r, cfg); });
    if (cfg.wants("steady_state"))
        group(kSteadyStateExtraColumns.size(), [&] { return steady_state_cells(cfg, p, out.warnings, false); });
    row.push_back(status);
    out.rows = {row};
    return out;
}

PointOutput evaluate(Subcommand cmd, const RunConfig& cfg) {
    switch (cmd) {
        case Subcommand::Spectra: return eval_spectra(cfg);
        case Subcommand::SteadyState: return eval_steady_state(cfg);
        case Subcommand::Dynamics: return eval_dynamics(cfg);
        case Subcommand::Zeno: return eval_zeno(cfg);
        case Subcommand::Sustainability: return eval_sustainability(cfg);
        case Subcommand::Timescales:
        case Subcommand::Sweep: return eval_timescales(cfg);
    }
    return {};
}

}  // namespace

std::optional<Subcommand> parse_subcommand(std::string_view name) {
    for (const auto cmd : {Subcommand::Spectra, Subcommand::SteadyState, Subcommand::Dynamics, Subcommand::Timescales,
                           Subcommand::Zeno, Subcommand::Sustainability, Subcommand::Sweep})
        if (subcommand_name(cmd) == name) return cmd;
    return std::nullopt;
}

std::string_view subcommand_name(Subcommand cmd) {
    switch (cmd) {
        case Subcommand::Spectra: return "spectra";
        case Subcommand::SteadyState: return "steady-state";
        case Subcommand::Dynamics: return "dynamics";
        case Subcommand::Timescales: return "timescales";
        case Subcommand::Zeno: return "zeno";
        case Subcommand::Sustainability: return "sustainability";
        case Subcommand::Sweep: return "sweep";
    }
    return "";
}

RunResult run(Subcommand cmd, const RunConfig& cfg) {
    if (cmd == Subcommand::Sweep && !cfg.sweep) throw ConfigError(0, "sweep requires a 'sweep = ...' line");
    if (cmd == Subcommand::Dynamics && cfg.sweep) throw ConfigError(0, "dynamics does not accept a sweep");
    if (cmd == Subcommand::Zeno && !cfg.measurement && !(cfg.sweep && cfg.sweep->parameter == "tau_m"))
        throw ConfigError(0, "zeno requires tau_m");
    if (cfg.sweep && (cfg.sweep->parameter == "k_delta_E") && !cfg.measurement)
        throw ConfigError(0, "sweeping k_delta_E requires tau_m");

    Columns cols = columns_for(cmd, cfg);
    const bool sweep_column = cfg.sweep && std::find(cols.begin(), cols.end(), cfg.sweep->parameter) == cols.end();
    if (sweep_column) cols.insert(cols.begin(), cfg.sweep->parameter);

    const std::vector<double> values = cfg.sweep ? cfg.sweep->points() : std::vector<double>{};
    const std::size_t n_points = cfg.sweep ? values.size() : 1;
    std::vector<PointOutput> results(n_points);

    const auto point = [&](std::size_t k) {
        if (!cfg.sweep) return evaluate(cmd, cfg);
        RunConfig local;
        try {
            local = with_parameter(cfg, cfg.sweep->parameter, values[k]);
        } catch (const std::exception& e) {
            PointOutput out;
            Row row = blank(cols.size() - (sweep_column ? 2 : 1));
            row.push_back(error_status(e));
            out.rows = {row};
            out.failed = true;
            return out;
        }
        return evaluate(cmd, local);
    };

    // Points are independent; rows are emitted in sweep order regardless of completion order.
    const std::size_t workers = std::min(cfg.threads, n_points);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n_points; ++k) results[k] = point(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n_points; k = next++) results[k] = point(k);
            });
    }

    CsvTable table(cols);
    RunResult result;
    result.points = n_points;
    for (std::size_t k = 0; k < n_points; ++k) {
        auto& r = results[k];
        if (r.failed) ++result.failed_points;
        for (auto& row : r.rows) {
            if (sweep_column) row.insert(row.begin(), format_double(values[k]));
            table.add_row(std::move(row));
        }
        for (auto& w : r.warnings) {
            result.warnings.push_back(cfg.sweep ? cfg.sweep->parameter + " = " + format_double(values[k]) + ": " + w
                                                : std::move(w));
        }
    }
    result.csv = table.to_string();
    result.exit_code = result.failed_points == n_points ? 2 : 0;
    return result;
}

}  // namespace sqz::cli
