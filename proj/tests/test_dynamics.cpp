#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles/bloch_matrix.hpp"
#include "oracles/random_params.hpp"
#include "sqz/dynamics.hpp"
#include "sqz/errors.hpp"

using namespace sqz;

namespace {

Eigen::Vector3cd as_vec(const BlochState& s) { return {s.sigma_minus, s.sigma_plus, cplx{s.sigma_z, 0.0}}; }

double rel_diff(const SteadyState& a, const SteadyState& b) {
    const double scale = std::max({1.0, std::abs(a.sigma_z_ss), std::abs(a.sigma_minus_ss)});
    return std::max({std::abs(a.sigma_z_ss - b.sigma_z_ss), std::abs(a.sigma_minus_ss - b.sigma_minus_ss),
                     std::abs(a.sigma_plus_ss - b.sigma_plus_ss)}) /
           scale;
}

BlochState random_state(std::mt19937_64& rng) {
    BlochState s;
    s.sigma_z = oracle::uniform(rng, -1.0, 1.0);
    const double r = 0.5 * std::sqrt(1.0 - s.sigma_z * s.sigma_z) * oracle::uniform(rng, 0.0, 1.0);
    s.sigma_minus = std::polar(r, oracle::uniform(rng, 0.0, 6.283));
    s.sigma_plus = std::conj(s.sigma_minus);
    return s;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("moment equations match an independently assembled linear system") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 500; ++i) {
        const auto c = oracle::random_case(rng);
        const auto p = effective_params(c.atom, c.bath);
        const auto L = oracle::assemble_bloch(c.bath.gamma, c.atom.omega_rabi, p.n_tilde, p.m_tilde, p.delta_eff, p.beta);
        const auto s = random_state(rng);
        const Eigen::Vector3cd expected = L.A * as_vec(s) + L.b;
        const BlochState r = bloch_rhs(s, p, c.atom, c.bath);
        REQUIRE(std::abs(r.sigma_minus - expected(0)) <= 1e-12);
        REQUIRE(std::abs(r.sigma_plus - expected(1)) <= 1e-12);
        REQUIRE(std::abs(r.sigma_z - expected(2).real()) <= 1e-12);
        REQUIRE(std::abs(expected(2).imag()) <= 1e-12);
        const auto G = bloch_generator(p, c.atom, c.bath);
        REQUIRE((G.A - L.A).norm() <= 1e-12);
        REQUIRE((G.b - L.b).norm() <= 1e-12);
    }
}

TEST_CASE("undriven vacuum decay is exponential") {
    AtomConfig a;
    a.omega_rabi = 0.0;
    a.delta = 0.0;
    BathConfig b;
    b.gamma = 1.0;
    b.epsilon = 0.0;
    EffectiveParams p;  // every squeezing coefficient zero
    BlochState s;
    s.sigma_z = 1.0;
    IntegratorOptions o;
    o.abs_tol = 1e-13;
    o.rel_tol = 1e-12;
    o.samples = 10;
    const auto traj = integrate_bloch(s, p, a, b, 5.0, o);
    REQUIRE(traj.size() == 11);
    for (const auto& pt : traj) {
        CHECK(pt.state.sigma_z == doctest::Approx(2.0 * std::exp(-pt.t) - 1.0).epsilon(1e-10));
    }
}

TEST_CASE("fixed-step RK4 agrees with the adaptive integrator") {
    std::mt19937_64 rng(31);
    const auto c = oracle::random_case(rng);
    const auto p = effective_params(c.atom, c.bath);
    IntegratorOptions adaptive;
    adaptive.abs_tol = 1e-12;
    adaptive.rel_tol = 1e-12;
    adaptive.samples = 4;
    IntegratorOptions fixed = adaptive;
    fixed.fixed_step = 1e-3;
    const auto a = integrate_bloch(BlochState{}, p, c.atom, c.bath, 4.0, adaptive);
    const auto f = integrate_bloch(BlochState{}, p, c.atom, c.bath, 4.0, fixed);
    REQUIRE(a.size() == f.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].t == f[k].t);
        CHECK(std::abs(a[k].state.sigma_z - f[k].state.sigma_z) <= 1e-9);
        CHECK(std::abs(a[k].state.sigma_minus - f[k].state.sigma_minus) <= 1e-9);
    }
}

TEST_CASE("integrator argument validation") {
    std::mt19937_64 rng(37);
    const auto c = oracle::random_case(rng);
    const auto p = effective_params(c.atom, c.bath);
    IntegratorOptions o;
    CHECK_THROWS_AS(integrate_bloch(BlochState{}, p, c.atom, c.bath, -1.0, o), InvalidParameter);
    o.abs_tol = 0.0;
    o.rel_tol = 0.0;
    CHECK_THROWS_AS(integrate_bloch(BlochState{}, p, c.atom, c.bath, 1.0, o), InvalidParameter);
    o = {};
    o.max_steps = 3;
    CHECK_THROWS(integrate_bloch(BlochState{}, p, c.atom, c.bath, 100.0, o));
}

TEST_CASE("steady state is a fixed point and the three routes agree") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 50; ++i) {
        const auto c = oracle::random_physical_case(rng);
        const auto p = effective_params(c.atom, c.bath);
        const auto an = steady_state_analytic(p, c.atom, c.bath);
        const auto nu = steady_state_numeric(p, c.atom, c.bath);
        BlochState s{an.sigma_minus_ss, an.sigma_plus_ss, an.sigma_z_ss};
        const auto r = bloch_rhs(s, p, c.atom, c.bath);
        REQUIRE(std::abs(r.sigma_minus) <= 1e-12 * c.bath.gamma);
        REQUIRE(std::abs(r.sigma_z) <= 1e-12 * c.bath.gamma);
        REQUIRE(std::abs(an.sigma_plus_ss - std::conj(an.sigma_minus_ss)) <= 1e-14);
        REQUIRE(rel_diff(an, nu) <= 1e-10);
        const auto lt = steady_state_long_time(p, c.atom, c.bath);
        REQUIRE(rel_diff(an, lt) <= 1e-6);
    }
}

TEST_CASE("vacuum steady state at zero drive is the ground state") {
    AtomConfig a;
    a.omega_rabi = 0.0;
    a.delta = 0.4;
    BathConfig b;
    b.gamma = 1.0;
    const auto p = effective_params(a, b);
    const auto s = steady_state_analytic(p, a, b);
    CHECK(s.sigma_z_ss == -1.0);
    CHECK(s.sigma_minus_ss == cplx{0.0, 0.0});
}

TEST_CASE("singular steady-state system is reported") {
    AtomConfig a;
    a.omega_rabi = 0.0;
    a.delta = 0.0;
    BathConfig b;
    b.gamma = 1.0;
    EffectiveParams p;
    p.n_tilde = -0.5;  // zeroes the σ_z decay rate
    CHECK_THROWS_AS(steady_state_analytic(p, a, b), SingularSystem);
    CHECK_THROWS_AS(steady_state_numeric(p, a, b), SingularSystem);
}

TEST_CASE("density matrix conversions") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 100; ++i) {
        const BlochState s = random_state(rng);
        const auto dm = DensityMatrix::from_bloch(s);
        CHECK(std::abs(dm.trace() - 1.0) <= 1e-15);
        CHECK(dm.hermiticity_error() <= 1e-15);
        CHECK(dm.min_eigenvalue() >= -1e-15);
        const auto back = dm.moments();
        CHECK(std::abs(back.sigma_minus - s.sigma_minus) <= 1e-15);
        CHECK(std::abs(back.sigma_z - s.sigma_z) <= 1e-15);
    }
    const auto g = DensityMatrix::ground();
    CHECK(g.moments().sigma_z == -1.0);
    DensityMatrix bad;
    bad.rho(0, 0) = 0.5;
    CHECK_THROWS_AS(validate(bad), InvalidParameter);
    bad.rho(1, 1) = 0.5;
    CHECK_NOTHROW(validate(bad));
    bad.rho(0, 1) = 0.1;
    CHECK_THROWS_AS(validate(bad), InvalidParameter);
}

TEST_CASE("superoperator reproduces the operator-form master equation") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 200; ++i) {
        const auto c = oracle::random_case(rng);
        const auto p = effective_params(c.atom, c.bath);
        const Superoperator L = master_superoperator(p, c.atom, c.bath);
        const auto rho = DensityMatrix::from_bloch(random_state(rng)).rho;
        Eigen::Vector4cd v;
        for (int r = 0; r < 2; ++r)
            for (int col = 0; col < 2; ++col) v(2 * r + col) = rho(r, col);
        const Eigen::Vector4cd lv = L * v;
        const Eigen::Matrix2cd direct = master_rhs(rho, p, c.atom, c.bath);
        for (int r = 0; r < 2; ++r)
            for (int col = 0; col < 2; ++col) REQUIRE(std::abs(lv(2 * r + col) - direct(r, col)) <= 1e-12);
        // trace preservation and Hermiticity of the generator
        REQUIRE(std::abs(direct.trace()) <= 1e-12);
        REQUIRE((direct - direct.adjoint()).norm() <= 1e-12);
    }
}

TEST_CASE("master-equation moments obey the moment equations") {
    std::mt19937_64 rng(53);
    for (int i = 0; i < 200; ++i) {
        const auto c = oracle::random_case(rng);
        const auto p = effective_params(c.atom, c.bath);
        const BlochState s = random_state(rng);
        const auto rho = DensityMatrix::from_bloch(s).rho;
        DensityMatrix drho;
        drho.rho = master_rhs(rho, p, c.atom, c.bath);
        // moments() is affine in ρ; subtract the trace-free offset by hand
        const cplx dminus = drho.rho(0, 1);
        const double dz = (drho.rho(0, 0) - drho.rho(1, 1)).real();
        const BlochState r = bloch_rhs(s, p, c.atom, c.bath);
        REQUIRE(std::abs(dminus - r.sigma_minus) <= 1e-12);
        REQUIRE(std::abs(dz - r.sigma_z) <= 1e-12);
    }
}

TEST_CASE("propagation has the semigroup property") {
    std::mt19937_64 rng(59);
    const auto c = oracle::random_physical_case(rng);
    const auto p = effective_params(c.atom, c.bath);
    const auto L = master_superoperator(p, c.atom, c.bath);
    const auto rho0 = DensityMatrix::ground();
    CHECK(propagate_density(rho0, L, 0.0).rho.rho == rho0.rho);
    const auto full = propagate_density(rho0, L, 3.0);
    const auto half = propagate_density(propagate_density(rho0, L, 1.2).rho, L, 1.8);
    CHECK((full.rho.rho - half.rho.rho).norm() <= 1e-12);
    CHECK(std::abs(full.rho.trace() - 1.0) <= 1e-12);
    CHECK_FALSE(full.positivity_violated);
    CHECK_THROWS_AS(propagate_density(rho0, L, -1.0), InvalidParameter);
}

TEST_CASE("physical-state predicate") {
    CHECK(is_physical(BlochState{}));
    BlochState s;
    s.sigma_z = 1.5;
    CHECK_FALSE(is_physical(s));
    s.sigma_z = 0.0;
    s.sigma_minus = 0.6;
    CHECK_FALSE(is_physical(s));
}


TEST_CASE("undriven steady state balances decay against the squeezed population") {
    std::mt19937_64 rng(83);
    for (int i = 0; i < 100; ++i) {
        auto c = oracle::random_case(rng);
        c.atom.omega_rabi = 0.0;
        if (c.atom.delta == 0.0) c.atom.delta = 0.3;
        const auto p = effective_params(c.atom, c.bath);
        if (p.n_tilde <= -0.5) continue;
        const double z = -1.0 / (1.0 + 2.0 * p.n_tilde);
        const auto r = bloch_rhs(BlochState{0.0, 0.0, z}, p, c.atom, c.bath);
        REQUIRE(std::abs(r.sigma_z) <= 1e-14 * c.bath.gamma);
        REQUIRE(std::abs(r.sigma_minus) == 0.0);
        if (physicality_check(p).physical && p.n_tilde > 0.0)
            REQUIRE(steady_state_analytic(p, c.atom, c.bath).sigma_z_ss == doctest::Approx(z).epsilon(1e-13));
    }
}

TEST_CASE("pure spontaneous decay from any population") {
    AtomConfig a;
    a.delta = 0.0;
    a.omega_rabi = 0.0;
    BathConfig b;
    b.gamma = 2.0;
    EffectiveParams p;
    for (double z : {-1.0, -0.3, 0.4, 1.0}) {
        const auto r = bloch_rhs(BlochState{0.0, 0.0, z}, p, a, b);
        CHECK(r.sigma_z == doctest::Approx(-2.0 * (z + 1.0)));
    }
    // the same limit through the master equation: excited population ∝ e^{−γt}
    const auto L = master_superoperator(p, a, b);
    BlochState excited;
    excited.sigma_z = 1.0;
    for (double t : {0.1, 0.5, 2.0}) {
        const auto rho = propagate_density(DensityMatrix::from_bloch(excited), L, t).rho.rho;
        CHECK(rho(0, 0).real() == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-13));
    }
}

TEST_CASE("trajectory started at the steady state stays there") {
    std::mt19937_64 rng(89);
    const auto c = oracle::random_physical_case(rng);
    const auto p = effective_params(c.atom, c.bath);
    const auto ss = steady_state_analytic(p, c.atom, c.bath);
    IntegratorOptions o;
    o.samples = 20;
    const BlochState start{ss.sigma_minus_ss, ss.sigma_plus_ss, ss.sigma_z_ss};
    for (const auto& pt : integrate_bloch(start, p, c.atom, c.bath, 20.0 / c.bath.gamma, o)) {
        REQUIRE(std::abs(pt.state.sigma_z - ss.sigma_z_ss) <= 10.0 * o.abs_tol);
        REQUIRE(std::abs(pt.state.sigma_minus - ss.sigma_minus_ss) <= 10.0 * o.abs_tol);
    }
}

TEST_CASE("long integration and long propagation approach the steady state") {
    std::mt19937_64 rng(97);
    for (int i = 0; i < 20; ++i) {
        const auto c = oracle::random_physical_case(rng);
        const auto p = effective_params(c.atom, c.bath);
        // slowest relaxation rate sets how long "long" must be
        const double rate = -bloch_generator(p, c.atom, c.bath).A.eigenvalues().real().maxCoeff();
        const double t_final = std::max(50.0 / c.bath.gamma, 40.0 / rate);
        const auto nu = steady_state_numeric(p, c.atom, c.bath);
        IntegratorOptions o;
        o.abs_tol = 1e-12;
        o.rel_tol = 1e-10;
        const auto traj = integrate_bloch(BlochState{}, p, c.atom, c.bath, t_final, o);
        const auto& end = traj.back().state;
        REQUIRE(std::abs(end.sigma_z - nu.sigma_z_ss) <= 1e-6 * std::max(1.0, std::abs(nu.sigma_z_ss)));
        REQUIRE(std::abs(end.sigma_minus - nu.sigma_minus_ss) <= 1e-6);
        const auto m = propagate_density(DensityMatrix::ground(), master_superoperator(p, c.atom, c.bath), t_final)
                           .rho.moments();
        const auto an = steady_state_analytic(p, c.atom, c.bath);
        REQUIRE(std::abs(m.sigma_z - an.sigma_z_ss) <= 1e-6);
        REQUIRE(std::abs(m.sigma_minus - an.sigma_minus_ss) <= 1e-6);
    }
}

}
