// bath_spectra.cpp

#include "sqz/bath_spectra.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sqz/errors.hpp"

namespace sqz {

void validate(const BathConfig& cfg) {
    if (!std::isfinite(cfg.gamma) || !(cfg.gamma > 0.0))
        throw InvalidParameter("bath: gamma must be finite and > 0");
    if (!std::isfinite(cfg.epsilon) || cfg.epsilon < 0.0)
        throw InvalidParameter("bath: epsilon must be finite and >= 0");
    if (!(cfg.epsilon < 0.5 * cfg.gamma))
        throw InvalidParameter("bath: epsilon must be below the amplification threshold gamma/2");
    if (!std::isfinite(cfg.delta_N) || !std::isfinite(cfg.delta_M))
        throw InvalidParameter("bath: delta_N and delta_M must be finite");
    if (cfg.omega_L && !std::isfinite(*cfg.omega_L))
        throw InvalidParameter("bath: omega_L must be finite");
    if (const auto* lin = std::get_if<LinearPhase>(&cfg.phase_model)) {
        if (!std::isfinite(lin->phi_atomic) || !std::isfinite(lin->omega))
            throw InvalidParameter("bath: linear phase model parameters must be finite");
        if (!(lin->omega > 0.0))
            throw InvalidParameter("bath: linear phase model requires Omega > 0");
    } else if (!std::isfinite(std::get<ConstantPhase>(cfg.phase_model).phi0)) {
        throw InvalidParameter("bath: constant phase must be finite");
    }
}

SpectralPair lambda_mu(const BathConfig& cfg) {
    validate(cfg);
    const double lambda = 0.5 * cfg.gamma + cfg.epsilon;
    // γ/2 <= λ <= γ, so the subtraction is exact.
    const double mu = cfg.gamma - lambda;
    if (!(mu > 0.0))
        throw InvalidParameter("bath: epsilon rounds onto the amplification threshold (mu <= 0)");
    return {lambda, mu};
}

namespace {

// (λ² − μ²)/4 written so that the ε → 0 limit carries no cancellation.
double half_width_factor(const SpectralPair& pair) {
    return 0.25 * (pair.lambda - pair.mu) * (pair.lambda + pair.mu);
}

}  // namespace

double spectrum_N(double x, const SpectralPair& pair) {
    const double k = half_width_factor(pair);
    const double x2 = x * x;
    // 1/(x²+μ²) − 1/(x²+λ²) = (λ²−μ²)/((x²+μ²)(x²+λ²)) = 4k/((x²+μ²)(x²+λ²))
    return 4.0 * k * k / ((x2 + pair.mu * pair.mu) * (x2 + pair.lambda * pair.lambda));
}

double spectrum_M_abs(double x, const SpectralPair& pair) {
    const double k = half_width_factor(pair);
    const double x2 = x * x;
    return k * (1.0 / (x2 + pair.mu * pair.mu) + 1.0 / (x2 + pair.lambda * pair.lambda));
}

double squeezing_phase(const BathConfig& cfg, double detuning) {
    if (const auto* lin = std::get_if<LinearPhase>(&cfg.phase_model)) {
        if (!(lin->omega > 0.0))
            throw InvalidParameter("linear phase model requires Omega > 0");
        return lin->phi_atomic + std::numbers::pi * detuning / lin->omega;
    }
    return std::get<ConstantPhase>(cfg.phase_model).phi0;
}

}  // namespace sqz
