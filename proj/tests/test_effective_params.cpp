#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles/random_params.hpp"
#include "oracles/straight_line.hpp"
#include "sqz/effective_params.hpp"
#include "sqz/errors.hpp"

using namespace sqz;

namespace {

constexpr double kPi = std::numbers::pi;

BathConfig bath(double gamma, double eps, double phi = 0.0, double dN = 0.0, double dM = 0.0) {
    BathConfig b;
    b.gamma = gamma;
    b.epsilon = eps;
    b.phase_model = ConstantPhase{phi};
    b.delta_N = dN;
    b.delta_M = dM;
    return b;
}

AtomConfig atom(double omega, double delta, double xi = 0.0) {
    AtomConfig a;
    a.omega_rabi = omega;
    a.delta = delta;
    a.xi_abs = xi;
    return a;
}

void check_against_oracle(const AtomConfig& a, const BathConfig& b, double phi, double tol) {
    const EffectiveParams p = effective_params_at_phase(a, b, phi);
    const auto o = oracle::straight_line(b.gamma, b.epsilon, a.omega_rabi, a.delta, phi, b.delta_N, b.delta_M);
    const auto close = [tol](double x, double y) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); };
    REQUIRE(close(p.omega_prime, o.omega_prime));
    REQUIRE(close(p.omega_tilde, o.omega_tilde));
    REQUIRE(close(p.delta_tilde, o.delta_tilde));
    REQUIRE(close(p.upsilon_minus.real(), o.ups_re));
    REQUIRE(close(p.upsilon_minus.imag(), o.ups_im));
    REQUIRE(close(p.n_tilde, o.n_tilde));
    REQUIRE(close(p.m_tilde.real(), o.m_re));
    REQUIRE(close(p.m_tilde.imag(), o.m_im));
    REQUIRE(close(p.delta_eff, o.delta_eff));
    REQUIRE(close(p.beta.real(), o.beta_re));
    REQUIRE(close(p.beta.imag(), o.beta_im));
    REQUIRE(close(p.d, o.d));
}

}  // namespace

TEST_SUITE("effective_params") {

TEST_CASE("upsilon_minus vanishes without squeezing or without a sideband") {
    CHECK(upsilon_minus(bath(1.0, 0.0), 1.3, 0.4) == cplx{0.0, 0.0});
    CHECK(upsilon_minus(bath(1.0, 0.3), 0.0, 0.4) == cplx{0.0, 0.0});
}

TEST_CASE("upsilon_minus at gamma=1, eps=0.25, Omega'=1, phi=0") {
    // [N(0) − N(1)] − [|M(0)| − |M(1)|] = (16/9 − 16/425) − (20/9 − 84/425) = −64/225
    const cplx u = upsilon_minus(bath(1.0, 0.25), 1.0, 0.0);
    CHECK(u.real() == doctest::Approx(-64.0 / 225.0).epsilon(1e-14));
    CHECK(u.imag() == 0.0);
}

TEST_CASE("upsilon_minus is 2pi-periodic in the phase") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto b = bath(1.0, oracle::uniform(rng, 0.0, 0.49));
        const double op = oracle::uniform(rng, 0.0, 5.0);
        const double phi = oracle::uniform(rng, -10.0, 10.0);
        const cplx a = upsilon_minus(b, op, phi);
        const cplx c = upsilon_minus(b, op, phi + 2.0 * kPi);
        REQUIRE(std::abs(a - c) <= 1e-12);
    }
}

TEST_CASE("ordinary vacuum gives vanishing squeezing coefficients") {
    for (const auto& a : {atom(1.0, 0.0), atom(0.0, 0.7), atom(2.0, -1.5)}) {
        const EffectiveParams p = effective_params(a, bath(1.7, 0.0, 0.9));
        CHECK(p.n_tilde == 0.0);
        CHECK(p.m_tilde == cplx{0.0, 0.0});
        CHECK(p.beta == cplx{0.0, 0.0});
        CHECK(p.delta_eff == a.delta / 1.7);
    }
}

TEST_CASE("resonant drive") {
    const auto b = bath(1.0, 0.3, 0.7);
    const EffectiveParams p = effective_params(atom(1.4, 0.0), b);
    CHECK(p.delta_tilde == 0.0);
    CHECK(p.omega_tilde == 1.0);
    CHECK(p.omega_prime == 1.4);
    const SpectralPair pair = lambda_mu(b);
    const cplx expected = spectrum_M_abs(1.4, pair) * std::polar(1.0, 0.7) - 0.5 * p.upsilon_minus;
    CHECK(std::abs(p.m_tilde - expected) <= 1e-15);
}

TEST_CASE("reference parameter set agrees with the straight-line evaluation and frozen values") {
    const auto a = atom(1.0, 0.2);
    const auto b = bath(1.0, 0.25, 0.0, 0.1, 0.1);
    check_against_oracle(a, b, 0.0, 1e-12);
    // High-precision reference values.
    const EffectiveParams p = effective_params(a, b);
    CHECK(p.omega_prime == doctest::Approx(1.019803902718556966).epsilon(1e-15));
    CHECK(p.upsilon_minus.real() == doctest::Approx(-0.28843820419483446005).epsilon(1e-14));
    CHECK(p.n_tilde == doctest::Approx(-0.10329664887275763139).epsilon(1e-13));
    CHECK(p.m_tilde.real() == doctest::Approx(0.33005401848727010305).epsilon(1e-14));
    CHECK(p.m_tilde.imag() == doctest::Approx(0.019611613513818403192).epsilon(1e-14));
    CHECK(p.delta_eff == doctest::Approx(0.21961161351381840319).epsilon(1e-14));
    CHECK(p.beta.real() == doctest::Approx(0.19611613513818403192).epsilon(1e-14));
    CHECK(p.beta.imag() == doctest::Approx(0.055468885422083550009).epsilon(1e-14));
    CHECK(p.d == doctest::Approx(0.95894687371415480166).epsilon(1e-14));
}

TEST_CASE("pipeline and straight-line evaluation agree on random parameters") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 2000; ++i) {
        const auto c = oracle::random_case(rng);
        const double phi = std::get<ConstantPhase>(c.bath.phase_model).phi0;
        check_against_oracle(c.atom, c.bath, phi, 1e-12);
    }
}

TEST_CASE("normalised frequencies lie on the unit circle") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 1000; ++i) {
        const auto c = oracle::random_case(rng);
        const auto p = effective_params(c.atom, c.bath);
        REQUIRE(std::abs(p.omega_tilde * p.omega_tilde + p.delta_tilde * p.delta_tilde - 1.0) <= 1e-12);
        REQUIRE(std::isfinite(p.d));
    }
}

TEST_CASE("linear phase model feeds the detuning-dependent phase") {
    auto b = bath(1.0, 0.2, 0.0, 0.0, 0.1);
    b.phase_model = LinearPhase{0.0, 2.0};
    const auto a = atom(2.0, 0.3);
    const auto p = effective_params(a, b);
    CHECK(p.phi == doctest::Approx(kPi * 0.3 / 2.0).epsilon(1e-15));
    const auto q = effective_params_at_phase(a, b, p.phi);
    CHECK(p.m_tilde == q.m_tilde);
}

TEST_CASE("degenerate and invalid configurations") {
    CHECK_THROWS_AS(effective_params(atom(0.0, 0.0), bath(1.0, 0.1)), DegenerateConfiguration);
    CHECK_THROWS_AS(effective_params(atom(-1.0, 0.0), bath(1.0, 0.1)), InvalidParameter);
    CHECK_THROWS_AS(effective_params(atom(1.0, 0.0, -0.1), bath(1.0, 0.1)), InvalidParameter);
    AtomConfig a = atom(1.0, 0.5);
    BathConfig b = bath(1.0, 0.1);
    a.omega_A = 10.0;
    b.omega_L = 10.5;
    CHECK_NOTHROW(validate(a, b));
    b.omega_L = 10.6;
    CHECK_THROWS_AS(validate(a, b), InvalidParameter);
}

TEST_CASE("physicality check") {
    EffectiveParams p;
    auto r = physicality_check(p);
    CHECK(r.physical);
    CHECK(r.margin == 0.0);
    p.n_tilde = 1.0;
    p.m_tilde = cplx{0.0, 1.0};
    r = physicality_check(p);
    CHECK(r.physical);
    CHECK(r.margin == doctest::Approx(1.0));
    p.n_tilde = 0.1;
    p.m_tilde = cplx{0.5, 0.0};
    r = physicality_check(p);
    CHECK_FALSE(r.physical);
    CHECK(r.margin == doctest::Approx(-0.14).epsilon(1e-14));
}

TEST_CASE("denominator is positive on physical random draws") {
    std::mt19937_64 rng(23);
    int accepted = 0;
    int counterexamples = 0;
    for (int i = 0; i < 20000 && accepted < 2000; ++i) {
        const auto c = oracle::random_case(rng);
        const auto p = effective_params(c.atom, c.bath);
        const auto pc = physicality_check(p);
        if (!pc.physical || p.n_tilde < 0.0) continue;
        ++accepted;
        if (!(p.d > 0.0)) {
            ++counterexamples;
            std::ostringstream os;
            os << "d <= 0: gamma=" << c.bath.gamma << " eps=" << c.bath.epsilon << " Omega=" << c.atom.omega_rabi
               << " Delta=" << c.atom.delta << " d=" << p.d;
            MESSAGE(os.str());
        }
    }
    MESSAGE("physical draws: " << accepted);
    CHECK(accepted > 100);
    CHECK(counterexamples == 0);
}

}
