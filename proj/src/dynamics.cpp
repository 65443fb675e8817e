// dynamics.cpp

#include "sqz/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

using Vec3 = Eigen::Vector3cd;
constexpr cplx kI{0.0, 1.0};

// Coefficients of the moment equations, gathered once per parameter set.
struct MomentCoefficients {
    cplx minus_diag;  // −γ(½ + Ñ − iδ)
    cplx plus_diag;   // −γ(½ + Ñ + iδ)
    cplx minus_cross; // −γ M̃
    cplx plus_cross;  // −γ M̃*
    cplx drive;       // iΩ/2
    cplx z_from_minus;// i(Ω + β*)
    cplx z_from_plus; // −i(Ω + β)
    double z_diag;    // −γ(1 + 2Ñ)
    double z_const;   // −γ
};

MomentCoefficients moment_coefficients(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath) {
    const double g = bath.gamma;
    const double omega = atom.omega_rabi;
    const double damping = 0.5 + p.n_tilde;
    MomentCoefficients c;
    c.minus_diag = -g * cplx{damping, -p.delta_eff};
    c.plus_diag = std::conj(c.minus_diag);
    c.minus_cross = -g * p.m_tilde;
    c.plus_cross = std::conj(c.minus_cross);
    c.drive = 0.5 * kI * omega;
    c.z_from_minus = kI * (omega + std::conj(p.beta));
    c.z_from_plus = -kI * (omega + p.beta);
    c.z_diag = -g * (1.0 + 2.0 * p.n_tilde);
    c.z_const = -g;
    return c;
}

Vec3 moment_rhs(const Vec3& v, const MomentCoefficients& c) {
    Vec3 out;
    out(0) = c.minus_diag * v(0) + c.minus_cross * v(1) + c.drive * v(2);
    // Hermitian conjugate of the σ₋ equation.
    out(1) = c.plus_diag * v(1) + c.plus_cross * v(0) - c.drive * v(2);
    out(2) = c.z_from_minus * v(0) + c.z_from_plus * v(1) + c.z_diag * v(2) + c.z_const;
    return out;
}

Vec3 to_vec(const BlochState& s) { return Vec3{s.sigma_minus, s.sigma_plus, cplx{s.sigma_z, 0.0}}; }

BlochState from_vec(const Vec3& v) { return {v(0), v(1), v(2).real()}; }

// Dormand–Prince 5(4) tableau.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp

class Recorder {
public:
    Recorder(double t_final, std::size_t samples, Trajectory& out)
        : t_final_(t_final), samples_(samples), out_(out) {}

    // Next time the integrator must land on exactly, or t_final.
    double next_stop() const {
        if (samples_ == 0) return t_final_;
        return next_ == samples_ ? t_final_ : t_final_ * static_cast<double>(next_) / static_cast<double>(samples_);
    }

    void record(double t, const Vec3& v, bool on_stop) {
        if (samples_ == 0) {
            out_.push_back({t, from_vec(v)});
        } else if (on_stop) {
            out_.push_back({t, from_vec(v)});
            ++next_;
        }
    }

    void start(const Vec3& v) {
        out_.push_back({0.0, from_vec(v)});
        next_ = 1;
    }

private:
    double t_final_;
    std::size_t samples_;
    std::size_t next_{1};
    Trajectory& out_;
};

double error_norm(const Vec3& err, const Vec3& y0, const Vec3& y1, double atol, double rtol) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double scale = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(err(i)) / scale;
        sum += r * r;
    }
    return std::sqrt(sum / 3.0);
}

void integrate_fixed(Vec3 y, const MomentCoefficients& c, double t_final, const IntegratorOptions& opts,
                     Recorder& rec) {
    double t = 0.0;
    std::size_t steps = 0;
    while (t < t_final) {
        const double stop = rec.next_stop();
        double h = opts.fixed_step;
        bool on_stop = false;
        if (t + h >= stop) {
            h = stop - t;
            on_stop = true;
        }
        const Vec3 k1 = moment_rhs(y, c);
        const Vec3 k2 = moment_rhs(y + 0.5 * h * k1, c);
        const Vec3 k3 = moment_rhs(y + 0.5 * h * k2, c);
        const Vec3 k4 = moment_rhs(y + h * k3, c);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = on_stop ? stop : t + h;
        rec.record(t, y, on_stop);
        if (++steps > opts.max_steps) throw StiffnessFailure("fixed-step integration exceeded max_steps");
    }
}

void integrate_adaptive(Vec3 y, const MomentCoefficients& c, double t_final, const IntegratorOptions& opts,
                        Recorder& rec, double rate_scale) {
    using namespace dp;
    double t = 0.0;
    double h = opts.initial_step > 0.0 ? opts.initial_step : 1e-3 / std::max(rate_scale, 1e-300);
    h = std::min(h, t_final);
    Vec3 k1 = moment_rhs(y, c);
    std::size_t steps = 0;

    while (t < t_final) {
        if (++steps > opts.max_steps) throw StiffnessFailure("adaptive integration exceeded max_steps");
        const double stop = rec.next_stop();
        bool on_stop = false;
        double h_try = h;
        if (t + h_try >= stop) {
            h_try = stop - t;
            on_stop = true;
        }
        if (h_try < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)) && !on_stop)
            throw StiffnessFailure("step size underflow at t = " + std::to_string(t));

        const Vec3 k2 = moment_rhs(y + h_try * (a21 * k1), c);
        const Vec3 k3 = moment_rhs(y + h_try * (a31 * k1 + a32 * k2), c);
        const Vec3 k4 = moment_rhs(y + h_try * (a41 * k1 + a42 * k2 + a43 * k3), c);
        const Vec3 k5 = moment_rhs(y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), c);
        const Vec3 k6 = moment_rhs(y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), c);
        const Vec3 y_new = y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec3 k7 = moment_rhs(y_new, c);
        const Vec3 err = h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double en = error_norm(err, y, y_new, opts.abs_tol, opts.rel_tol);
        if (en <= 1.0) {
            t = on_stop ? stop : t + h_try;
            y = y_new;
            k1 = k7;
            rec.record(t, y, on_stop);
            const double grow = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            // A truncated landing step says nothing about the natural step size.
            if (!on_stop || h_try >= h) h = h_try * grow;
        } else {
            h = h_try * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 1.0);
        }
    }
}

}  // namespace

bool is_physical(const BlochState& s, double tol) {
    return std::abs(s.sigma_z) <= 1.0 + tol && std::abs(s.sigma_minus) <= 0.5 + tol;
}

BlochState bloch_rhs(const BlochState& s, const EffectiveParams& p, const AtomConfig& atom,
                     const BathConfig& bath) {
    return from_vec(moment_rhs(to_vec(s), moment_coefficients(p, atom, bath)));
}

BlochGenerator bloch_generator(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath) {
    const MomentCoefficients c = moment_coefficients(p, atom, bath);
    BlochGenerator gen;
    gen.A << c.minus_diag, c.minus_cross, c.drive,
             c.plus_cross, c.plus_diag, -c.drive,
             c.z_from_minus, c.z_from_plus, c.z_diag;
    gen.b << 0.0, 0.0, c.z_const;
    return gen;
}

Trajectory integrate_bloch(const BlochState& initial, const EffectiveParams& p, const AtomConfig& atom,
                           const BathConfig& bath, double t_final, const IntegratorOptions& opts) {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw InvalidParameter("integrate_bloch: t_final must be > 0");
    if (!(opts.abs_tol > 0.0) || !(opts.rel_tol > 0.0))
        throw InvalidParameter("integrate_bloch: tolerances must be > 0");
    if (opts.fixed_step < 0.0) throw InvalidParameter("integrate_bloch: fixed_step must be >= 0");

    const MomentCoefficients c = moment_coefficients(p, atom, bath);
    Trajectory out;
    out.reserve(opts.samples > 0 ? opts.samples + 1 : 256);
    Recorder rec(t_final, opts.samples, out);
    const Vec3 y0 = to_vec(initial);
    rec.start(y0);
    if (opts.fixed_step > 0.0) {
        integrate_fixed(y0, c, t_final, opts, rec);
    } else {
        const double rate_scale = bloch_generator(p, atom, bath).A.cwiseAbs().rowwise().sum().maxCoeff();
        integrate_adaptive(y0, c, t_final, opts, rec, rate_scale);
    }
    return out;
}

SteadyState steady_state_analytic(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath) {
    const double g = bath.gamma;
    const double g2 = g * g;
    if (!(std::abs(p.d) >= 1e-14 * g2 * g))
        throw SingularSystem("steady state: denominator d vanishes");
    const double bracket = 0.25 + p.n_tilde * (p.n_tilde + 1.0) - std::norm(p.m_tilde) + p.delta_eff * p.delta_eff;
    SteadyState ss;
    ss.d = p.d;
    ss.sigma_z_ss = -g * g2 * bracket / p.d;
    ss.sigma_plus_ss = kI * (atom.omega_rabi / (2.0 * p.d)) * g2 *
                       (0.5 + p.n_tilde + std::conj(p.m_tilde) - kI * p.delta_eff);
    ss.sigma_minus_ss = std::conj(ss.sigma_plus_ss);
    return ss;
}

SteadyState steady_state_numeric(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath) {
    const BlochGenerator gen = bloch_generator(p, atom, bath);
    const Eigen::FullPivLU<Eigen::Matrix3cd> lu(gen.A);
    const double scale = gen.A.cwiseAbs().maxCoeff();
    if (!lu.isInvertible() || lu.rcond() < 1e-14 || !(scale > 0.0))
        throw SingularSystem("steady state: moment equations are singular");
    const Vec3 v = lu.solve(-gen.b);
    SteadyState ss;
    ss.sigma_minus_ss = v(0);
    ss.sigma_plus_ss = v(1);
    ss.sigma_z_ss = v(2).real();
    ss.d = p.d;
    return ss;
}

SteadyState steady_state_long_time(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath,
                                   const LongTimeOptions& opts) {
    const double relax = bath.gamma * (1.0 + 2.0 * p.n_tilde);
    const double horizon = opts.horizon > 0.0 ? opts.horizon : 100.0 / (relax > 0.0 ? relax : bath.gamma);
    IntegratorOptions io = opts.integrator;
    io.samples = 1;

    BlochState s{};
    for (std::size_t k = 0; k < opts.max_horizons; ++k) {
        const Trajectory tr = integrate_bloch(s, p, atom, bath, horizon, io);
        s = tr.back().state;
        const BlochState r = bloch_rhs(s, p, atom, bath);
        const double rn = std::sqrt(std::norm(r.sigma_minus) + std::norm(r.sigma_plus) + r.sigma_z * r.sigma_z);
        if (rn < opts.rhs_tol * bath.gamma) {
            return {s.sigma_z, s.sigma_plus, s.sigma_minus, p.d};
        }
        io.initial_step = 0.0;
    }
    throw ConvergenceFailure("steady state: long-time integration did not become stationary");
}

// ---------------------------------------------------------------------------
// Density matrix

DensityMatrix DensityMatrix::from_bloch(const BlochState& s) {
    DensityMatrix dm;
    // ⟨σ₋⟩ = tr(ρσ₋) = ρ_eg, ⟨σ₊⟩ = ρ_ge
    dm.rho << 0.5 * (1.0 + s.sigma_z), s.sigma_minus,
              s.sigma_plus, 0.5 * (1.0 - s.sigma_z);
    return dm;
}

DensityMatrix DensityMatrix::ground() { return from_bloch(BlochState{}); }

BlochState DensityMatrix::moments() const {
    return {rho(0, 1), rho(1, 0), (rho(0, 0) - rho(1, 1)).real()};
}

double DensityMatrix::hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
    const Eigen::Matrix2cd h = 0.5 * (rho + rho.adjoint());
    const double a = h(0, 0).real();
    const double b = h(1, 1).real();
    return 0.5 * (a + b) - std::hypot(0.5 * (a - b), std::abs(h(0, 1)));
}

void validate(const DensityMatrix& dm) {
    if (std::abs(dm.trace() - 1.0) > 1e-12) throw InvalidParameter("density matrix: trace differs from 1");
    if (dm.hermiticity_error() > 1e-12) throw InvalidParameter("density matrix: not Hermitian");
}

// ---------------------------------------------------------------------------
// Master equation

namespace {

struct PauliSet {
    Eigen::Matrix2cd sz, sp, sm;
};

const PauliSet& paulis() {
    static const PauliSet set = [] {
        PauliSet s;
        s.sz << 1.0, 0.0, 0.0, -1.0;
        s.sp << 0.0, 1.0, 0.0, 0.0;
        s.sm << 0.0, 0.0, 1.0, 0.0;
        return s;
    }();
    return set;
}

Eigen::Matrix2cd comm(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) { return a * b - b * a; }

}  // namespace

Eigen::Matrix2cd master_rhs(const Eigen::Matrix2cd& rho, const EffectiveParams& p, const AtomConfig& atom,
                            const BathConfig& bath) {
    const auto& [sz, sp, sm] = paulis();
    const double g = bath.gamma;
    const double n = p.n_tilde;
    const Eigen::Matrix2cd spsm = sp * sm;
    const Eigen::Matrix2cd smsp = sm * sp;
    const Eigen::Matrix2cd sz_rho = comm(sz, rho);

    Eigen::Matrix2cd out = 0.5 * kI * g * p.delta_eff * sz_rho;
    out += 0.5 * g * n * (2.0 * sp * rho * sm - smsp * rho - rho * smsp);
    out += 0.5 * g * (n + 1.0) * (2.0 * sm * rho * sp - spsm * rho - rho * spsm);
    out -= g * p.m_tilde * (sp * rho * sp);
    out -= g * std::conj(p.m_tilde) * (sm * rho * sm);
    out -= 0.5 * kI * atom.omega_rabi * comm(sp + sm, rho);
    out += 0.25 * kI * (p.beta * comm(sp, sz_rho) - std::conj(p.beta) * comm(sm, sz_rho));
    return out;
}

Superoperator master_superoperator(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath) {
    Superoperator L;
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            Eigen::Matrix2cd basis = Eigen::Matrix2cd::Zero();
            basis(k, l) = 1.0;
            const Eigen::Matrix2cd image = master_rhs(basis, p, atom, bath);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) L(2 * i + j, 2 * k + l) = image(i, j);
        }
    }
    return L;
}

DensityPropagation propagate_density(const DensityMatrix& rho0, const Superoperator& generator, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("propagate_density: t must be >= 0");
    DensityPropagation out;
    if (t == 0.0) {
        out.rho = rho0;
    } else {
        Eigen::Vector4cd v;
        v << rho0.rho(0, 0), rho0.rho(0, 1), rho0.rho(1, 0), rho0.rho(1, 1);
        const Superoperator prop = (generator * t).exp();
        const Eigen::Vector4cd w = prop * v;
        out.rho.rho << w(0), w(1), w(2), w(3);
    }
    out.min_eigenvalue = out.rho.min_eigenvalue();
    out.positivity_violated = out.min_eigenvalue < -1e-6;
    return out;
}

}  // namespace sqz
