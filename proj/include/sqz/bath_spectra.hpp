// bath_spectra.hpp — Lorentzian spectra of a finite-bandwidth squeezed vacuum
//
// The squeezed reservoir is produced by a degenerate parametric amplifier with
// cavity damping rate γ and amplification constant ε. Its photon-number and
// two-photon correlation spectra are Lorentzians of widths
//
//     λ = γ/2 + ε,   μ = γ/2 − ε
//
// evaluated at the offset x = ω − ω_L from the laser frequency:
//
//     N(x)   = (λ² − μ²)/4 · [1/(x² + μ²) − 1/(x² + λ²)]
//     |M(x)| = (λ² − μ²)/4 · [1/(x² + μ²) + 1/(x² + λ²)]
//
// These saturate the minimum-uncertainty bound |M|² = N(N + 1) pointwise.
// The library is unit-agnostic: all frequencies are plain doubles in whatever
// unit the caller chooses.

#pragma once

#include <optional>
#include <variant>

namespace sqz {

// φ(Δ) = φ₀ for every detuning.
struct ConstantPhase {
    double phi0{0.0};
};

// φ(Δ) = φ(ω_A) + πΔ/Ω. `omega` must be strictly positive.
struct LinearPhase {
    double phi_atomic{0.0};
    double omega{1.0};
};

using PhaseModel = std::variant<ConstantPhase, LinearPhase>;

struct BathConfig {
    double gamma{1.0};              // cavity damping rate, > 0
    double epsilon{0.0};            // amplification constant, 0 <= ε < γ/2
    std::optional<double> omega_L;  // laser frequency; only used for the detuning consistency check
    PhaseModel phase_model{ConstantPhase{}};
    double delta_N{0.0};            // squeezing-induced shift attached to N (dimensionless)
    double delta_M{0.0};            // squeezing-induced shift attached to |M| (dimensionless)
};

struct SpectralPair {
    double lambda{0.5};
    double mu{0.5};
};

// Throws InvalidParameter if γ <= 0, ε < 0, ε >= γ/2 or any field is non-finite.
void validate(const BathConfig& cfg);

// λ = γ/2 + ε and μ = γ − λ, so that λ + μ == γ holds bit-exactly.
SpectralPair lambda_mu(const BathConfig& cfg);

double spectrum_N(double x, const SpectralPair& pair);
double spectrum_M_abs(double x, const SpectralPair& pair);

// Squeezing phase at detuning Δ under the configured phase model.
double squeezing_phase(const BathConfig& cfg, double detuning);

}  // namespace sqz
