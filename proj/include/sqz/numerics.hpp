// numerics.hpp — quadrature and bracketing helpers used by the oracles and solvers

#pragma once

#include <complex>
#include <functional>
#include <limits>

namespace sqz::num {

struct QuadratureResult {
    double value{0.0};
    double error_estimate{0.0};
};

// Adaptive Gauss–Kronrod on [a, b]; b may be +infinity. Throws
// ConvergenceFailure when the error estimate exceeds max(abs_tol, rel_tol·L1).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-13, double abs_tol = 0.0);

struct Bracket {
    double lo{0.0};
    double hi{0.0};
};

struct RootResult {
    double root{0.0};
    double residual{0.0};  // |f(root)|
    bool bracketed{true};  // false if f had no sign change on the interval
};

// Bisection on [lo, hi] down to adjacent doubles. An exact zero at either end
// is returned as-is; with no sign change the endpoint of smaller |f| is
// returned and `bracketed` is false.
RootResult bisect(const std::function<double(double)>& f, Bracket b);

// e^z − 1 without cancellation for small |z|.
std::complex<double> expm1(std::complex<double> z);

}  // namespace sqz::num
