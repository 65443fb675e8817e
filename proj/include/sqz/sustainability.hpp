// sustainability.hpp — squeezing phase at which the decay parameter vanishes
//
// Im M̃ is a pure sinusoid in the squeezing phase,
//
//     Im M̃(φ) = −ζ sin φ + Δ̃ δ_M cos φ,
//     ζ = ½(1 − Δ̃²)[|M(Ω')| − |M(0)|] − |M(Ω')|,
//
// so Γ = 0 exactly when tan φ = Δ̃ δ_M / ζ. The closed form and an
// independent bisection of Im M̃(φ) are both provided.

#pragma once

#include "sqz/effective_params.hpp"

namespace sqz {

enum class SolutionStatus {
    Ok,
    Degenerate,  // Im M̃ ≡ 0: every phase is a solution
};

struct SustainabilitySolution {
    double phi_star{0.0};              // principal root in (−π/2, π/2]
    double phi_companion{0.0};         // phi_star + π
    double zeta{0.0};
    double omega_tilde_required{0.0};  // π|ζ|/δ_M, set by omega_tilde_condition
    bool feasible{false};              // 0 < omega_tilde_required <= 1
    double residual{0.0};              // |Im M̃(phi_star)|
    SolutionStatus status{SolutionStatus::Ok};
};

// ζ from the spectral samples of a populated parameter set.
double zeta(const EffectiveParams& p);

// Im M̃ with the squeezing phase pinned to `phi` (the bath's phase model is ignored).
double im_M_tilde(double phi, const AtomConfig& atom, const BathConfig& bath);

// φ* = arctan(Δ̃δ_M/ζ); ζ = 0 with Δ̃δ_M ≠ 0 gives φ* = π/2.
SustainabilitySolution solve_phi_closed_form(const AtomConfig& atom, const BathConfig& bath);

// Bisection of Im M̃ over (−π/2, π/2] and (π/2, 3π/2].
SustainabilitySolution solve_phi_root(const AtomConfig& atom, const BathConfig& bath);

// Required Ω̃ = π|ζ|/δ_M for the linear phase model. Throws InvalidParameter
// when δ_M <= 0 or the bath does not use LinearPhase.
SustainabilitySolution omega_tilde_condition(const AtomConfig& atom, const BathConfig& bath);

}  // namespace sqz
