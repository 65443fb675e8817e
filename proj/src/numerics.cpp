// numerics.cpp

#include "sqz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "sqz/errors.hpp"

namespace sqz::num {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol) {
    using boost::math::quadrature::gauss_kronrod;
    constexpr unsigned kMaxDepth = 30;
    double error = 0.0;
    double l1 = 0.0;
    const double value = gauss_kronrod<double, 61>::integrate(f, a, b, kMaxDepth, rel_tol, &error, &l1);
    if (!std::isfinite(value) || error > std::max(abs_tol, 10.0 * rel_tol * l1))
        throw ConvergenceFailure("quadrature did not converge (error estimate " + std::to_string(error) + ")");
    return {value, error};
}

RootResult bisect(const std::function<double(double)>& f, Bracket b) {
    const double f_lo = f(b.lo);
    const double f_hi = f(b.hi);
    if (f_lo == 0.0) return {b.lo, 0.0, true};
    if (f_hi == 0.0) return {b.hi, 0.0, true};
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        const bool take_lo = std::abs(f_lo) <= std::abs(f_hi);
        return {take_lo ? b.lo : b.hi, std::min(std::abs(f_lo), std::abs(f_hi)), false};
    }
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits);
    const auto [lo, hi] = boost::math::tools::bisect(f, b.lo, b.hi, tol);
    const double r_lo = std::abs(f(lo));
    const double r_hi = std::abs(f(hi));
    return r_lo <= r_hi ? RootResult{lo, r_lo, true} : RootResult{hi, r_hi, true};
}

std::complex<double> expm1(std::complex<double> z) {
    const double x = z.real();
    const double y = z.imag();
    const double s = std::sin(0.5 * y);
    // e^x cos y − 1 = expm1(x) cos y − 2 sin²(y/2)
    const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
    const double im = std::exp(x) * std::sin(y);
    return {re, im};
}

}  // namespace sqz::num
