// effective_params.cpp

#include "sqz/effective_params.hpp"

#include <algorithm>
#include <cmath>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

constexpr double kDetuningConsistencyTol = 1e-12;

cplx unit_phase(double phi) { return std::polar(1.0, phi); }

}  // namespace

void validate(const AtomConfig& atom, const BathConfig& bath) {
    validate(bath);
    if (!std::isfinite(atom.omega_rabi) || atom.omega_rabi < 0.0)
        throw InvalidParameter("atom: Omega must be finite and >= 0");
    if (!std::isfinite(atom.xi_abs) || atom.xi_abs < 0.0)
        throw InvalidParameter("atom: xi_abs must be finite and >= 0");
    if (!std::isfinite(atom.delta))
        throw InvalidParameter("atom: Delta must be finite");
    if (atom.omega_A && bath.omega_L) {
        const double expected = *bath.omega_L - *atom.omega_A;
        const double scale = std::max({1.0, std::abs(*bath.omega_L), std::abs(*atom.omega_A)});
        if (std::abs(expected - atom.delta) > kDetuningConsistencyTol * scale)
            throw InvalidParameter("atom: Delta disagrees with omega_L - omega_A");
    }
}

cplx upsilon_minus(const BathConfig& bath, double omega_prime, double phi) {
    const SpectralPair pair = lambda_mu(bath);
    const double dn = spectrum_N(0.0, pair) - spectrum_N(omega_prime, pair);
    const double dm = spectrum_M_abs(0.0, pair) - spectrum_M_abs(omega_prime, pair);
    return dn - dm * unit_phase(phi);
}

double steady_state_denominator(double n_tilde, cplx m_tilde, double delta_eff, cplx beta,
                                double gamma, double omega_rabi) {
    const double g3 = gamma * gamma * gamma;
    const double bracket = 0.25 + n_tilde * (n_tilde + 1.0) - std::norm(m_tilde) + delta_eff * delta_eff;
    const double drive = (0.5 + n_tilde + m_tilde.real()) * (omega_rabi + beta.real()) +
                         beta.imag() * (m_tilde.imag() + delta_eff);
    return g3 * (1.0 + 2.0 * n_tilde) * bracket + gamma * omega_rabi * drive;
}

EffectiveParams effective_params_at_phase(const AtomConfig& atom, const BathConfig& bath, double phi) {
    validate(atom, bath);
    EffectiveParams p;
    p.phi = phi;
    p.omega_prime = std::hypot(atom.omega_rabi, atom.delta);
    if (!(p.omega_prime > 0.0))
        throw DegenerateConfiguration("Omega' = sqrt(Omega^2 + Delta^2) vanishes; normalised frequencies undefined");
    p.omega_tilde = atom.omega_rabi / p.omega_prime;
    p.delta_tilde = atom.delta / p.omega_prime;

    const SpectralPair pair = lambda_mu(bath);
    p.samples.n_laser = spectrum_N(0.0, pair);
    p.samples.n_sideband = spectrum_N(p.omega_prime, pair);
    p.samples.m_laser = spectrum_M_abs(0.0, pair);
    p.samples.m_sideband = spectrum_M_abs(p.omega_prime, pair);

    const cplx e_phi = unit_phase(phi);
    p.upsilon_minus = (p.samples.n_laser - p.samples.n_sideband) -
                      (p.samples.m_laser - p.samples.m_sideband) * e_phi;

    const double half_transverse = 0.5 * (1.0 - p.delta_tilde * p.delta_tilde);
    const cplx i{0.0, 1.0};

    p.n_tilde = p.samples.n_sideband + half_transverse * p.upsilon_minus.real();
    p.m_tilde = p.samples.m_sideband * e_phi - half_transverse * p.upsilon_minus +
                i * p.delta_tilde * bath.delta_M * e_phi;
    p.delta_eff = atom.delta / bath.gamma - half_transverse * p.upsilon_minus.imag() +
                  p.delta_tilde * bath.delta_N;
    p.beta = bath.gamma * p.omega_tilde *
             (bath.delta_N + bath.delta_M * e_phi - i * p.delta_tilde * p.upsilon_minus);
    p.d = steady_state_denominator(p.n_tilde, p.m_tilde, p.delta_eff, p.beta, bath.gamma, atom.omega_rabi);
    return p;
}

EffectiveParams effective_params(const AtomConfig& atom, const BathConfig& bath) {
    validate(bath);
    return effective_params_at_phase(atom, bath, squeezing_phase(bath, atom.delta));
}

PhysicalityCheck physicality_check(const EffectiveParams& p) {
    const double margin = p.n_tilde * (p.n_tilde + 1.0) - std::norm(p.m_tilde);
    return {margin >= 0.0, margin};
}

}  // namespace sqz
