// bloch_matrix.hpp — test-only assembly of the moment equations as v̇ = A v + b
//
// Coefficients are entered one by one from the equations for ⟨σ₋⟩ and ⟨σ_z⟩;
// the ⟨σ₊⟩ row is the entrywise conjugate of the ⟨σ₋⟩ row with the σ₋/σ₊
// columns swapped.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace sqz::oracle {

struct LinearBloch {
    Eigen::Matrix3cd A;
    Eigen::Vector3cd b;
};

inline LinearBloch assemble_bloch(double gamma, double omega, double n_tilde, std::complex<double> m_tilde,
                                  double delta_eff, std::complex<double> beta) {
    using c = std::complex<double>;
    const c I{0, 1};
    LinearBloch L;
    L.A.setZero();
    L.b.setZero();
    // ⟨σ₋⟩' = −γ(½+Ñ−iδ)⟨σ₋⟩ − γM̃⟨σ₊⟩ + (i/2)Ω⟨σ_z⟩
    L.A(0, 0) = -gamma * (0.5 + n_tilde) + I * gamma * delta_eff;
    L.A(0, 1) = -gamma * m_tilde;
    L.A(0, 2) = 0.5 * I * omega;
    // conjugate row
    L.A(1, 1) = std::conj(L.A(0, 0));
    L.A(1, 0) = std::conj(L.A(0, 1));
    L.A(1, 2) = std::conj(L.A(0, 2));
    // ⟨σ_z⟩' = i(Ω+β*)⟨σ₋⟩ − i(Ω+β)⟨σ₊⟩ − γ(1+2Ñ)⟨σ_z⟩ − γ
    L.A(2, 0) = I * (omega + std::conj(beta));
    L.A(2, 1) = -I * (omega + beta);
    L.A(2, 2) = -gamma * (1 + 2 * n_tilde);
    L.b(2) = -gamma;
    return L;
}

}  // namespace sqz::oracle
