// sustainability.cpp

#include "sqz/sustainability.hpp"

#include <cmath>
#include <numbers>

#include "sqz/errors.hpp"
#include "sqz/numerics.hpp"

namespace sqz {

namespace {

constexpr double kPi = std::numbers::pi;

// Im M̃ vanishes identically when both sinusoid coefficients are zero.
bool is_degenerate(double a, double b) { return a == 0.0 && b == 0.0; }

}  // namespace

double zeta(const EffectiveParams& p) {
    const double half_transverse = 0.5 * (1.0 - p.delta_tilde * p.delta_tilde);
    return half_transverse * (p.samples.m_sideband - p.samples.m_laser) - p.samples.m_sideband;
}

double im_M_tilde(double phi, const AtomConfig& atom, const BathConfig& bath) {
    return effective_params_at_phase(atom, bath, phi).m_tilde.imag();
}

SustainabilitySolution solve_phi_closed_form(const AtomConfig& atom, const BathConfig& bath) {
    const EffectiveParams p = effective_params_at_phase(atom, bath, 0.0);
    SustainabilitySolution s;
    s.zeta = zeta(p);
    const double numerator = p.delta_tilde * bath.delta_M;
    if (s.zeta == 0.0) {
        if (numerator == 0.0) {
            s.status = SolutionStatus::Degenerate;
            s.phi_star = 0.0;
        } else {
            s.phi_star = kPi / 2.0;
        }
    } else {
        s.phi_star = std::atan(numerator / s.zeta);
    }
    s.phi_companion = s.phi_star + kPi;
    s.residual = std::abs(im_M_tilde(s.phi_star, atom, bath));
    return s;
}

SustainabilitySolution solve_phi_root(const AtomConfig& atom, const BathConfig& bath) {
    const auto f = [&](double phi) { return im_M_tilde(phi, atom, bath); };
    SustainabilitySolution s;
    // Im M̃(π/2) = a and Im M̃(0) = b for Im M̃ = a sin φ + b cos φ.
    const double a = f(kPi / 2.0);
    const double b = f(0.0);
    s.zeta = -a;
    if (is_degenerate(a, b)) {
        s.status = SolutionStatus::Degenerate;
        s.phi_companion = kPi;
        return s;
    }
    // The principal bracket is half-open at −π/2; an exact zero there belongs to π/2.
    num::RootResult principal = num::bisect(f, {-kPi / 2.0, kPi / 2.0});
    if (principal.root == -kPi / 2.0) principal.root = kPi / 2.0;
    s.phi_star = principal.root;
    if (principal.root == kPi / 2.0) {
        // a = 0: cos φ is the whole sinusoid and its other zero is 3π/2.
        s.phi_companion = 3.0 * kPi / 2.0;
    } else {
        s.phi_companion = num::bisect(f, {kPi / 2.0, 3.0 * kPi / 2.0}).root;
    }
    s.residual = std::abs(f(s.phi_star));
    return s;
}

SustainabilitySolution omega_tilde_condition(const AtomConfig& atom, const BathConfig& bath) {
    if (!std::holds_alternative<LinearPhase>(bath.phase_model))
        throw InvalidParameter("omega_tilde_condition requires the linear phase model");
    if (!(bath.delta_M > 0.0)) throw InvalidParameter("omega_tilde_condition requires delta_M > 0");
    SustainabilitySolution s = solve_phi_closed_form(atom, bath);
    s.omega_tilde_required = kPi * std::abs(s.zeta) / bath.delta_M;
    s.feasible = s.omega_tilde_required > 0.0 && s.omega_tilde_required <= 1.0;
    return s;
}

}  // namespace sqz
