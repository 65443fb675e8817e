// dynamics.hpp — master-equation and Bloch-equation evolution of the atom
//
// Two representations of the same dynamics are provided:
//
//  * the moment (Bloch) equations for ⟨σ₋⟩, ⟨σ₊⟩, ⟨σ_z⟩, integrated with an
//    adaptive Dormand–Prince 5(4) scheme;
//  * the 4×4 generator of the density-matrix master equation, propagated by
//    matrix exponential.
//
// Basis convention: index 0 = excited |e⟩, index 1 = ground |g⟩, so that
// σ_z = diag(1, −1), σ₊ = |e⟩⟨g|, σ₋ = |g⟩⟨e|. Density matrices are
// vectorised row-major: vec(ρ)[2i + j] = ρ(i, j).

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "sqz/effective_params.hpp"

namespace sqz {

struct BlochState {
    cplx sigma_minus{};
    cplx sigma_plus{};
    double sigma_z{-1.0};
};

// |σ_z| <= 1 and |σ₋| <= ½ within `tol`.
bool is_physical(const BlochState& s, double tol = 1e-9);

// Right-hand side of the moment equations. The σ₊ row is the Hermitian
// conjugate of the σ₋ row; σ_z's derivative is returned as its real part.
BlochState bloch_rhs(const BlochState& s, const EffectiveParams& p, const AtomConfig& atom,
                     const BathConfig& bath);

// Linear form v̇ = A v + b with v = (⟨σ₋⟩, ⟨σ₊⟩, ⟨σ_z⟩).
struct BlochGenerator {
    Eigen::Matrix3cd A;
    Eigen::Vector3cd b;
};
BlochGenerator bloch_generator(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath);

struct IntegratorOptions {
    double abs_tol{1e-10};
    double rel_tol{1e-8};
    double initial_step{0.0};      // 0 = pick from the generator's norm
    double fixed_step{0.0};        // > 0 switches to classical RK4 with this step
    std::size_t samples{0};        // > 0: record exactly at t_k = k·t_final/samples
    std::size_t max_steps{50'000'000};
};

struct TrajectoryPoint {
    double t{0.0};
    BlochState state{};
};
using Trajectory = std::vector<TrajectoryPoint>;

// Throws InvalidParameter on bad tolerances/horizon and StiffnessFailure when
// the adaptive step underflows.
Trajectory integrate_bloch(const BlochState& initial, const EffectiveParams& p, const AtomConfig& atom,
                           const BathConfig& bath, double t_final, const IntegratorOptions& opts = {});

struct SteadyState {
    double sigma_z_ss{-1.0};
    cplx sigma_plus_ss{};
    cplx sigma_minus_ss{};
    double d{0.0};
};

// Closed form; throws SingularSystem when |d| < 1e-14·γ³.
SteadyState steady_state_analytic(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath);

// Zero of the moment equations by LU solve; throws SingularSystem.
SteadyState steady_state_numeric(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath);

struct LongTimeOptions {
    IntegratorOptions integrator{1e-13, 1e-11};
    double horizon{0.0};          // 0 = 100/(γ(1+2Ñ))
    double rhs_tol{1e-10};        // convergence when ‖rhs‖ < rhs_tol·γ
    std::size_t max_horizons{200};
};

// Integrates from the ground state until the moment equations are stationary.
// Throws ConvergenceFailure if the test is not met within max_horizons.
SteadyState steady_state_long_time(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath,
                                   const LongTimeOptions& opts = {});

struct DensityMatrix {
    Eigen::Matrix2cd rho{Eigen::Matrix2cd::Zero()};

    static DensityMatrix from_bloch(const BlochState& s);
    static DensityMatrix ground();

    BlochState moments() const;
    cplx trace() const { return rho.trace(); }
    double hermiticity_error() const;
    double min_eigenvalue() const;  // of the Hermitian part
};

// Trace and Hermiticity to 1e-12; throws InvalidParameter.
void validate(const DensityMatrix& dm);

using Superoperator = Eigen::Matrix4cd;

Superoperator master_superoperator(const EffectiveParams& p, const AtomConfig& atom, const BathConfig& bath);

// ρ̇ evaluated directly from the operator form of the master equation.
Eigen::Matrix2cd master_rhs(const Eigen::Matrix2cd& rho, const EffectiveParams& p, const AtomConfig& atom,
                            const BathConfig& bath);

struct DensityPropagation {
    DensityMatrix rho;
    double min_eigenvalue{0.0};
    bool positivity_violated{false};  // min eigenvalue below −1e-6
};

DensityPropagation propagate_density(const DensityMatrix& rho0, const Superoperator& generator, double t);

}  // namespace sqz
