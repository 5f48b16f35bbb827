#include <array>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "test_helpers.hpp"
#include "tlsbath/errors.hpp"
#include "tlsbath/tls_bath.hpp"

using namespace tlsbath;

namespace {

// Thermal, dephased, detuned, complex drive. Reference values come from an
// independent density-matrix integration.
TlsParams reference_tls() {
    TlsParams p;
    p.kappa1 = 0.3;
    p.kappa2 = 0.1;
    p.Omega_B = {0.7, 0.2};
    p.omega_B = 1.0;
    p.couplings = {1.0};
    return p;
}

BathEnvironment reference_env() { return {0.4, 0.75}; }

constexpr double kDeltaM = -0.6;

}  // namespace

TEST_CASE("Bloch steady state matches the reference density matrix") {
    const BlochSteadyState b = bloch_steady_state(reference_tls(), reference_env());
    check_close(b.sigma_plus, {-0.054937232757845095, 0.17301411085363627}, 1e-12);
    CHECK(b.sigma_z == doctest::Approx(-0.2255165956331726).epsilon(1e-12));
}

TEST_CASE("Bloch steady state is stationary under the Bloch matrix") {
    const TlsParams p = reference_tls();
    const BathEnvironment env = reference_env();
    const BlochSteadyState b = bloch_steady_state(p, env);
    ComplexVector v(3);
    v << b.sigma_plus, std::conj(b.sigma_plus), b.sigma_z;
    ComplexVector residual = bloch_matrix(p, env) * v;
    residual[2] -= p.kappa1;  // inhomogeneous part drives sigma_z towards -1
    CHECK(residual.norm() < 1e-13);
}

TEST_CASE("correlator integrals match direct quadrature") {
    const TlsParams p = reference_tls();
    const BathEnvironment env = reference_env();
    const ComplexVector plus = correlator_integral(p, env, Sign::Plus, kDeltaM);
    const ComplexVector minus = correlator_integral(p, env, Sign::Minus, kDeltaM);
    check_close(plus[0], {-0.11133192627479323, -0.34277413855944083}, 1e-9);
    check_close(plus[1], {0.3204094203696997, -0.3727183870975506}, 1e-9);
    check_close(minus[0], {0.3107979560322392, 0.3005757143955908}, 1e-9);
    check_close(minus[1], {-0.22899088018451869, 0.05121759421027762}, 1e-9);
}

TEST_CASE("undriven thermal TLS gives a single Lorentzian") {
    TlsParams p = reference_tls();
    p.Omega_B = 0.0;
    const BathEnvironment env = reference_env();
    const double nbar = bose_occupation(p.omega_B, env.temperature);
    const double kt = transverse_rate(p, env);
    const double Delta_B = p.omega_B - env.omega_d;
    const Complex expected = (nbar / (1.0 + 2.0 * nbar)) / (kt - kI * Delta_B + kI * kDeltaM);
    check_close(correlator_integral(p, env, Sign::Minus, kDeltaM)[0], expected, 1e-13);
    CHECK(saturation(p, env) == 0.0);
}

TEST_CASE("zero temperature occupations") {
    CHECK(bose_occupation(1.0, 0.0) == 0.0);
    CHECK(thermal_tanh(1.0, 0.0) == 1.0);
    CHECK(bose_occupation(1.0, 1.0) == doctest::Approx(1.0 / std::expm1(1.0)));
}

TEST_CASE("ensemble merges identical members and the PSD is additive") {
    TlsParams a = reference_tls();
    TlsParams b = reference_tls();
    b.kappa1 = 0.2;
    b.couplings = {0.5 - 0.3 * kI};
    const std::vector<TlsParams> members{a, b, a, a};
    const TlsEnsemble merged = TlsEnsemble::from_list(members);
    const TlsEnsemble split = TlsEnsemble::from_list(members, false);
    CHECK(merged.groups().size() == 2);
    CHECK(split.groups().size() == 4);
    CHECK(merged.size() == 4.0);

    const BathEnvironment env = reference_env();
    const std::array<double, 1> det{kDeltaM};
    for (const Sign alpha : {Sign::Plus, Sign::Minus}) {
        for (const Sign beta : {Sign::Plus, Sign::Minus}) {
            check_close(psd(merged, env, det, alpha, beta, 0, 0), psd(split, env, det, alpha, beta, 0, 0), 1e-13);
        }
    }
    const PsdTable table(merged, env, det);
    check_close(table(Sign::Plus, Sign::Minus, 0, 0), psd(merged, env, det, Sign::Plus, Sign::Minus, 0, 0), 1e-15);
}

TEST_CASE("invalid TLS parameters are rejected") {
    TlsParams p = reference_tls();
    p.kappa1 = 0.0;
    CHECK_THROWS_AS(bloch_steady_state(p, reference_env()), InvalidParameter);
    p.kappa1 = 0.3;
    BathEnvironment env = reference_env();
    env.temperature = -1.0;
    CHECK_THROWS_AS(bloch_steady_state(p, env), InvalidParameter);
}
