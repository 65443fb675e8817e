// coherence.cpp

#include "sqz/coherence.hpp"

#include <cmath>
#include <limits>

#include "sqz/errors.hpp"
#include "sqz/numerics.hpp"

namespace sqz {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_denominator(const EffectiveParams& p, const BathConfig& bath) {
    const double g3 = bath.gamma * bath.gamma * bath.gamma;
    if (!(std::abs(p.d) >= 1e-14 * g3)) throw SingularSystem("decay parameter: denominator d vanishes");
}

// Upper bound on the amplitude of Im M̃(φ) = a sin φ + b cos φ.
double im_m_tilde_scale(const EffectiveParams& p, const BathConfig& bath) {
    const double half_transverse = 0.5 * std::abs(1.0 - p.delta_tilde * p.delta_tilde);
    return p.samples.m_sideband + half_transverse * std::abs(p.samples.m_laser - p.samples.m_sideband) +
           std::abs(p.delta_tilde * bath.delta_M);
}

}  // namespace

cplx degree_of_coherence(const EvolutionSpec& spec, double tau) {
    if (!(tau >= 0.0)) throw InvalidParameter("degree_of_coherence: tau must be >= 0");
    return std::exp(cplx{-spec.gamma_decay * tau, spec.alpha * tau});
}

cplx coherence_function_numeric(const EvolutionSpec& spec, double tau, double half_width, double rel_tol) {
    if (!(half_width > 0.0)) throw InvalidParameter("coherence_function_numeric: T must be > 0");
    const auto U = [&](double t) { return std::exp(kI * spec.alpha * t - spec.gamma_decay * t); };
    const auto re = [&](double t) { return (std::conj(U(t)) * U(t + tau)).real(); };
    const auto im = [&](double t) { return (std::conj(U(t)) * U(t + tau)).imag(); };
    const auto r = num::integrate(re, -half_width, half_width, rel_tol);
    const auto i = num::integrate(im, -half_width, half_width, rel_tol, rel_tol * std::abs(r.value));
    return cplx{r.value, i.value} / (2.0 * half_width);
}

cplx coherence_function_closed_form(const EvolutionSpec& spec, double tau, double half_width) {
    if (!(half_width > 0.0)) throw InvalidParameter("coherence_function_closed_form: T must be > 0");
    const double x = 2.0 * spec.gamma_decay * half_width;
    const double window = x == 0.0 ? 1.0 : std::sinh(x) / x;
    return window * std::exp(cplx{-spec.gamma_decay * tau, spec.alpha * tau});
}

double coherence_time(double gamma_decay) {
    if (std::isnan(gamma_decay) || gamma_decay < 0.0)
        throw InvalidParameter("coherence_time: decay parameter must be >= 0");
    if (gamma_decay == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (2.0 * gamma_decay);
}

double decay_parameter_squeezed(const AtomConfig& atom, const EffectiveParams& p, const BathConfig& bath) {
    check_denominator(p, bath);
    const double g2 = bath.gamma * bath.gamma;
    return atom.xi_abs * atom.omega_rabi * g2 * p.m_tilde.imag() / (4.0 * p.d);
}

double oscillation_frequency_squeezed(const AtomConfig& atom, const EffectiveParams& p, const BathConfig& bath) {
    check_denominator(p, bath);
    const double g = bath.gamma;
    const double bracket = 0.25 + p.n_tilde * (p.n_tilde + 1.0) - std::norm(p.m_tilde) + p.delta_eff * p.delta_eff;
    return 0.5 * (atom.omega_rabi * g * g * g * bracket / p.d -
                  atom.xi_abs * atom.omega_rabi * g * g * p.delta_eff / (2.0 * p.d));
}

TimescaleReport coherence_time_squeezed(const AtomConfig& atom, const BathConfig& bath, const EffectiveParams& p) {
    TimescaleReport r;
    r.d = p.d;
    r.im_m_tilde = p.m_tilde.imag();
    r.gamma_decay = decay_parameter_squeezed(atom, p, bath);
    r.alpha = oscillation_frequency_squeezed(atom, p, bath);
    if (std::abs(r.im_m_tilde) <= kZeroDecayRelTol * im_m_tilde_scale(p, bath) || r.gamma_decay == 0.0)
        r.gamma_decay = 0.0;
    r.gain = r.gamma_decay < 0.0;
    // Gain is reported with a signed coherence time rather than clamped.
    r.tau_C = r.gamma_decay == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / (2.0 * r.gamma_decay);
    return r;
}

TimescaleReport coherence_time_squeezed(const AtomConfig& atom, const BathConfig& bath) {
    return coherence_time_squeezed(atom, bath, effective_params(atom, bath));
}

}  // namespace sqz
