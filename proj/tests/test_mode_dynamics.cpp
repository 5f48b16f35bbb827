#include <cmath>
#include <vector>

#include <doctest.h>

#include "test_helpers.hpp"
#include "tlsbath/errors.hpp"
#include "tlsbath/mode_dynamics.hpp"

using namespace tlsbath;

namespace {

SingleModeRates generic_rates() {
    SingleModeRates r;
    r.Omega0_prime = {0.4, 0.1};
    r.delta = 0.1;
    r.g = {0.05, 0.02};
    r.gamma_plus = 0.1;
    r.gamma_minus = 0.3;
    r.gamma = 0.2;
    r.Gamma = {0.03, -0.01};
    return r;
}

SingleModeSetup reference_setup(double s_target, double Delta_0_per_kt) {
    constexpr double kt = 5e-5;
    SingleModeSetup s;
    s.tls_count = 1e5;
    s.coupling = 1e-8;
    s.kappa1 = 1e-4;
    s.gamma_0 = 1e-7;
    s.Omega_B = std::sqrt(s_target * s.kappa1 * kt);
    s.omega_0 = s.omega_d + Delta_0_per_kt * kt;
    return s;
}

MomentSystem system_for(const SingleModeSetup& s) {
    return build_moment_system(s.rates(), s.gamma_0, s.Delta_0());
}

}  // namespace

TEST_CASE("bare damped oscillator spectrum") {
    const MomentSystem ms = build_moment_system(SingleModeRates{}, 0.1, 0.3);
    std::vector<Complex> ev = num::eigenvalues(ms.drift);
    const std::vector<Complex> expected{-0.1, {-0.05, 0.3}, {-0.05, -0.3}, {-0.1, 0.6}, {-0.1, -0.6}};
    for (const Complex e : expected) {
        double best = 1.0;
        for (const Complex x : ev) best = std::min(best, std::abs(x - e));
        CHECK(best < 1e-13);
    }
}

TEST_CASE("without g the first and second moments decouple") {
    SingleModeRates r = generic_rates();
    r.g = 0.0;
    const MomentSystem ms = build_moment_system(r, 1.0, 0.5);
    CHECK(ms.drift(1, 2) == Complex(0.0));
    CHECK(ms.drift(2, 1) == Complex(0.0));
    CHECK(ms.drift(0, 3) == Complex(0.0));
    CHECK(ms.drift(3, 0) == Complex(0.0));
    CHECK(ms.drift.block(1, 3, 2, 2).norm() == 0.0);
}

TEST_CASE("undriven damped mode relaxes to vacuum") {
    const SteadyStateReport rep = steady_state(build_moment_system(SingleModeRates{}, 0.1, 0.3));
    REQUIRE(rep.v_ss);
    CHECK(rep.v_ss->norm() == 0.0);
    CHECK(rep.covariance.Vx == doctest::Approx(0.5));
    CHECK(rep.covariance.Vp == doctest::Approx(0.5));
    CHECK(rep.xi == doctest::Approx(1.0));

    const SteadyStateReport bath = steady_state(system_for(reference_setup(0.0, 0.0)));
    REQUIRE(bath.v_ss);
    CHECK(bath.v_ss->norm() < 1e-12);
    CHECK(bath.xi == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("steady state satisfies the moment equations and invariants") {
    const MomentSystem ms = build_moment_system(generic_rates(), 1.0, 0.5);
    const SteadyStateReport rep = steady_state(ms);
    REQUIRE(rep.stable());
    REQUIRE(rep.v_ss);
    CHECK(rep.residual < 1e-13);
    CHECK(rep.conjugation_ok);
    CHECK(rep.heisenberg_ok);
    CHECK(rep.occupation_ok);
    CHECK(rep.positive_definite);
    CHECK(rep.verdict.criterion_holds);
}

TEST_CASE("evolution: identity at t = 0, conjugation symmetry, relaxation") {
    const MomentSystem ms = build_moment_system(generic_rates(), 1.0, 0.5);
    ComplexVector v0(5);
    v0 << 2.0, Complex(0.3, -0.7), Complex(0.3, 0.7), Complex(-0.2, 0.4), Complex(-0.2, -0.4);
    CHECK((evolve_moments(ms, v0, 0.0) - v0).norm() == 0.0);
    for (const double t : {0.3, 2.0, 7.5}) {
        const ComplexVector v = evolve_moments(ms, v0, t);
        CHECK(std::abs(v[0].imag()) < 1e-12);
        CHECK(std::abs(v[1] - std::conj(v[2])) < 1e-12);
        CHECK(std::abs(v[3] - std::conj(v[4])) < 1e-12);
    }
    const SteadyStateReport rep = steady_state(ms);
    CHECK((evolve_moments(ms, v0, 60.0) - *rep.v_ss).norm() < 1e-8);
}

TEST_CASE("approximate steady state: accurate at low drive, worse at saturation") {
    const auto deviation = [](double sat) {
        const SingleModeSetup s = reference_setup(sat, 0.0);
        const SingleModeRates r = s.rates();
        const SteadyStateReport rep = steady_state(build_moment_system(r, s.gamma_0, s.Delta_0()));
        REQUIRE(rep.v_ss);
        return rel(approx_steady_state(r, s.gamma_0).n, (*rep.v_ss)[0].real());
    };
    const double low = deviation(1e-3);
    const double high = deviation(1.0);
    CHECK(low < 0.01);
    CHECK(high > low);
    CHECK_THROWS_AS(approx_steady_state(SingleModeRates{}, 0.0), InvalidParameter);
}

TEST_CASE("g1 limits and unstable handling") {
    const MomentSystem ms = build_moment_system(generic_rates(), 1.0, 0.5);
    const SteadyStateReport rep = steady_state(ms);
    const std::vector<double> grid = default_tau_grid(ms.gamma_total);
    CHECK(grid.front() == 0.0);
    const CoherenceSeries g1 = coherence_g1(ms, rep, grid);
    CHECK(g1.g1.front() == Complex(1.0));
    const ComplexVector& v = *rep.v_ss;
    CHECK(std::abs(std::abs(g1.g1.back()) - std::norm(v[1]) / v[0].real()) < 1e-3);

    SingleModeRates r = generic_rates();
    r.g = 1.0;
    const MomentSystem bad = build_moment_system(r, 1.0, 0.5);
    const SteadyStateReport unstable = steady_state(bad);
    CHECK_FALSE(unstable.stable());
    CHECK_FALSE(unstable.v_ss);
    CHECK(std::isnan(unstable.xi));
    CHECK_THROWS_AS(coherence_g1(bad, unstable, grid), UnstableSystem);
}

TEST_CASE("resonant stability follows the 4|g| criterion") {
    for (const double g0 : {1e-9, 3e-8, 1e-7, 1e-6}) {
        for (const double sat : {0.1, 1.0, 10.0}) {
            SingleModeSetup s = reference_setup(sat, 0.0);
            s.gamma_0 = g0;
            const StabilityVerdict v = stability(system_for(s));
            CHECK(v.stable == v.criterion_holds);
        }
    }
}
