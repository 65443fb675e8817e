// errors.hpp — exception types shared by the sqz library

#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

// Parameter set violates a documented invariant (ε >= γ/2, negative rates, ...).
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Ω' = 0: the normalised Rabi frequency and detuning are undefined.
struct DegenerateConfiguration : std::domain_error {
    using std::domain_error::domain_error;
};

// Steady-state denominator or linear system is numerically singular.
struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive integrator step size underflowed.
struct StiffnessFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature or iterative solve did not reach the requested tolerance.
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sqz
