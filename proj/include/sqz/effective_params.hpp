// effective_params.hpp — bandwidth-corrected master-equation coefficients
//
// A two-level atom driven at Rabi frequency Ω and detuning Δ samples the
// squeezing spectra at the laser frequency (offset 0) and at the dressed
// sideband (offset Ω' = √(Ω² + Δ²)). The resulting effective coefficients are
//
//     Υ₋ = N(0) − N(Ω') − [|M(0)| − |M(Ω')|] e^{iφ}
//     Ñ  = N(Ω') + ½(1 − Δ̃²) Re Υ₋
//     M̃  = |M(Ω')| e^{iφ} − ½(1 − Δ̃²) Υ₋ + i Δ̃ δ_M e^{iφ}
//     δ  = Δ/γ − ½(1 − Δ̃²) Im Υ₋ + Δ̃ δ_N
//     β  = γ Ω̃ [δ_N + δ_M e^{iφ} − i Δ̃ Υ₋]
//
// with Ω̃ = Ω/Ω' and Δ̃ = Δ/Ω'. The complex M(ω) carries a single global phase
// φ taken from the bath's phase model at the configured detuning.

#pragma once

#include <complex>
#include <optional>

#include "sqz/bath_spectra.hpp"

namespace sqz {

using cplx = std::complex<double>;

struct AtomConfig {
    double omega_rabi{0.0};         // Rabi frequency Ω, >= 0
    std::optional<double> omega_A;  // atomic transition frequency, optional
    double delta{0.0};              // detuning Δ = ω_L − ω_A
    double xi_abs{0.0};             // attenuation magnitude |ξ|, >= 0
};

// Throws InvalidParameter on Ω < 0, |ξ| < 0, non-finite input, or when both
// ω_L and ω_A are given and disagree with Δ.
void validate(const AtomConfig& atom, const BathConfig& bath);

// Spectra sampled at the laser frequency and the dressed sideband.
struct SpectralSamples {
    double n_laser{0.0};     // N(0)
    double n_sideband{0.0};  // N(Ω')
    double m_laser{0.0};     // |M(0)|
    double m_sideband{0.0};  // |M(Ω')|
};

struct EffectiveParams {
    double n_tilde{0.0};
    cplx m_tilde{};
    double delta_eff{0.0};
    cplx beta{};
    double omega_prime{0.0};
    double omega_tilde{0.0};
    double delta_tilde{0.0};
    cplx upsilon_minus{};
    double d{0.0};            // steady-state denominator
    double phi{0.0};          // squeezing phase the coefficients were built with
    SpectralSamples samples{};
};

cplx upsilon_minus(const BathConfig& bath, double omega_prime, double phi);

// Uses the bath's phase model evaluated at atom.delta.
EffectiveParams effective_params(const AtomConfig& atom, const BathConfig& bath);

// Same pipeline with the squeezing phase pinned to `phi`.
EffectiveParams effective_params_at_phase(const AtomConfig& atom, const BathConfig& bath, double phi);

// d = γ³(1+2Ñ)(¼ + Ñ(Ñ+1) − |M̃|² + δ²)
//   + γΩ[(½ + Ñ + Re M̃)(Ω + Re β) + Im β (Im M̃ + δ)]
double steady_state_denominator(double n_tilde, cplx m_tilde, double delta_eff, cplx beta,
                                double gamma, double omega_rabi);

struct PhysicalityCheck {
    bool physical{true};
    double margin{0.0};  // Ñ(Ñ+1) − |M̃|²
};

// |M̃|² <= Ñ(Ñ+1). Violations are reported, never thrown.
PhysicalityCheck physicality_check(const EffectiveParams& p);

}  // namespace sqz
