// coherence.hpp — temporal coherence, decay parameter and coherence time
//
// For an effective evolution U(t) = exp[iαt − Γt] the degree of temporal
// coherence is g(τ) = exp[iατ − Γτ] and the coherence time is
// τ_C = ∫₀^∞ |g|² dτ = 1/(2Γ). In the squeezed bath the steady-state
// attenuation channel gives Γ = |ξ| Ω γ² Im M̃ / (4d).

#pragma once

#include <complex>
#include <optional>

#include "sqz/effective_params.hpp"

namespace sqz {

struct EvolutionSpec {
    double alpha{0.0};        // oscillation frequency
    double gamma_decay{0.0};  // Γ >= 0
};

struct TimescaleReport {
    double gamma_decay{0.0};       // Γ; negative means gain
    double tau_C{0.0};             // 1/(2Γ), +inf when Γ == 0
    std::optional<double> tau_D;   // weak dwell time, set once τ_m is known
    std::optional<double> ratio;   // τ_C / τ_D
    double d{0.0};
    double im_m_tilde{0.0};
    double alpha{0.0};             // oscillatory part of the steady-state evolution
    bool gain{false};              // Γ < 0
};

cplx degree_of_coherence(const EvolutionSpec& spec, double tau);

// Quadrature of (1/2T)∫_{−T}^{T} U*(t)U(t+τ) dt. Throws ConvergenceFailure.
cplx coherence_function_numeric(const EvolutionSpec& spec, double tau, double half_width, double rel_tol = 1e-13);

// sinh(2ΓT)/(2ΓT) · exp[iατ − Γτ].
cplx coherence_function_closed_form(const EvolutionSpec& spec, double tau, double half_width);

// 1/(2Γ); +inf at Γ = 0; throws InvalidParameter for Γ < 0.
double coherence_time(double gamma_decay);

// Raw |ξ|Ωγ² Im M̃ / (4d); throws SingularSystem when |d| < 1e-14·γ³.
double decay_parameter_squeezed(const AtomConfig& atom, const EffectiveParams& p, const BathConfig& bath);

// ½[Ωγ³(¼ + Ñ(Ñ+1) − |M̃|² + δ²)/d − |ξ|Ωγ²δ/(2d)]
double oscillation_frequency_squeezed(const AtomConfig& atom, const EffectiveParams& p, const BathConfig& bath);

// |Im M̃| below this fraction of its φ-amplitude is treated as exactly zero.
inline constexpr double kZeroDecayRelTol = 1e-12;

// Full pipeline. τ_D and ratio are left empty; see with_dwell_time().
TimescaleReport coherence_time_squeezed(const AtomConfig& atom, const BathConfig& bath);
TimescaleReport coherence_time_squeezed(const AtomConfig& atom, const BathConfig& bath, const EffectiveParams& p);

}  // namespace sqz
