#include <cmath>
#include <vector>

#include <doctest.h>

#include "test_helpers.hpp"
#include "tlsbath/app/scenarios.hpp"
#include "tlsbath/errors.hpp"
#include "tlsbath/mode_dynamics.hpp"
#include "tlsbath/oracle.hpp"

using namespace tlsbath;

namespace {

// Off-resonant, thermal, dephased, complex couplings. Reference values come
// from an independent density-matrix computation at Fock dimension 6.
oracle::FullModel reference_model() {
    TlsParams p;
    p.omega_B = 1.0;
    p.kappa1 = 0.1;
    p.kappa2 = 0.02;
    p.Omega_B = 0.2;
    p.couplings = {{0.04, 0.02}};
    return {ModeParams{1.02, 0.05, {0.03, -0.01}}, {p}, BathEnvironment{0.3, 0.99}};
}

TlsParams correlator_tls() {
    TlsParams p;
    p.kappa1 = 0.3;
    p.kappa2 = 0.1;
    p.Omega_B = {0.7, 0.2};
    p.couplings = {1.0};
    return p;
}

}  // namespace

TEST_CASE("full Lindblad steady state matches the reference") {
    const oracle::HilbertSpec spec{6, 1, 64};
    const oracle::Liouvillian l = oracle::build_liouvillian(reference_model(), spec);
    const ComplexMatrix rho = oracle::steady_state_full(l);
    const oracle::Expectations e = oracle::expectations(rho, spec);
    check_close(e.s, {-0.38401318495648207, -0.415983387996651}, 1e-9);
    CHECK(e.n == doctest::Approx(0.5150840434400619).epsilon(1e-9));
    check_close(e.s2, {-0.0033436032829373343, 0.32077852240978}, 1e-9);
    CHECK(e.sigma_z[0] == doctest::Approx(-0.23073138544768876).epsilon(1e-9));
}

TEST_CASE("trace is a left null vector of the Liouvillian") {
    const oracle::HilbertSpec spec{5, 1, 64};
    const oracle::Liouvillian l = oracle::build_liouvillian(reference_model(), spec);
    const auto dim = static_cast<Eigen::Index>(spec.dimension());
    ComplexVector trace = ComplexVector::Zero(dim * dim);
    for (Eigen::Index k = 0; k < dim; ++k) trace[k * dim + k] = 1.0;
    CHECK((l.matrix.adjoint() * trace).norm() < 1e-13);
}

TEST_CASE("evolution preserves trace and Hermiticity and relaxes to the steady state") {
    const oracle::HilbertSpec spec{6, 1, 64};
    const oracle::Liouvillian l = oracle::build_liouvillian(reference_model(), spec);
    const ComplexMatrix rho0 = oracle::coherent_state(spec, {0.4, -0.2});
    CHECK((oracle::evolve(l, rho0, 0.0) - rho0).norm() == 0.0);
    const ComplexMatrix rho = oracle::evolve(l, rho0, 3.0);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    CHECK((rho - rho.adjoint()).norm() < 1e-12);
    const ComplexMatrix late = oracle::evolve(l, rho0, 2000.0);
    CHECK((late - oracle::steady_state_full(l)).norm() < 1e-6);
}

TEST_CASE("coherent state expectations") {
    const oracle::HilbertSpec spec{30, 1, 64};
    const Complex alpha{1.2, -0.5};
    const oracle::Expectations e = oracle::expectations(oracle::coherent_state(spec, alpha), spec);
    check_close(e.s, alpha, 1e-10);
    CHECK(e.n == doctest::Approx(std::norm(alpha)).epsilon(1e-10));
    CHECK(e.Vx == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(e.sigma_z[0] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("undriven system at zero temperature relaxes to vacuum and ground") {
    oracle::FullModel m = reference_model();
    m.mode.Omega = 0.0;
    m.tls[0].Omega_B = 0.0;
    m.env.temperature = 0.0;
    const oracle::HilbertSpec spec{4, 1, 64};
    const oracle::Expectations e =
        oracle::expectations(oracle::steady_state_full(oracle::build_liouvillian(m, spec)), spec);
    CHECK(e.n < 1e-12);
    CHECK(e.sigma_z[0] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("uncoupled TLS reproduces the Bloch steady state") {
    oracle::FullModel m = reference_model();
    m.tls[0].couplings = {0.0};
    const oracle::HilbertSpec spec{4, 1, 64};
    const oracle::Expectations e =
        oracle::expectations(oracle::steady_state_full(oracle::build_liouvillian(m, spec)), spec);
    const BlochSteadyState b = bloch_steady_state(m.tls[0], m.env);
    check_close(e.sigma_plus[0], b.sigma_plus, 1e-10);
    CHECK(e.sigma_z[0] == doctest::Approx(b.sigma_z).epsilon(1e-10));
}

TEST_CASE("dimension cap and degenerate kernel") {
    CHECK_THROWS_AS(oracle::build_liouvillian(reference_model(), oracle::HilbertSpec{40, 1, 64}), DimensionCap);
    CHECK_THROWS_AS(oracle::HilbertSpec({8, 1, 512}).validate(), InvalidParameter);

    oracle::FullModel m = reference_model();
    m.mode.gamma = 0.0;
    m.mode.Omega = 0.0;
    m.tls[0].couplings = {0.0};
    CHECK_THROWS_AS(oracle::steady_state_full(oracle::build_liouvillian(m, oracle::HilbertSpec{3, 1, 64})),
                    KernelDimension);
}

TEST_CASE("numeric regression integrals match the Bloch-equation correlators") {
    const TlsParams p = correlator_tls();
    const BathEnvironment env{0.4, 0.75};
    const double dm = -0.6;
    for (const Sign beta : {Sign::Plus, Sign::Minus}) {
        const ComplexVector analytic = correlator_integral(p, env, beta, dm);
        check_close(oracle::bloch_correlator_numeric(p, env, Sign::Plus, beta, dm), analytic[0], 1e-9);
        check_close(oracle::bloch_correlator_numeric(p, env, Sign::Minus, beta, dm), analytic[1], 1e-9);
    }
    check_close(oracle::bloch_correlator_numeric(p, env, Sign::Minus, Sign::Minus, dm),
                {-0.22899088018451869, 0.05121759421027762}, 1e-9);
}

TEST_CASE("conjugate correlator equals the reversed-order integral") {
    const TlsParams p = correlator_tls();
    const BathEnvironment env{0.4, 0.75};
    const double dm = 0.35;
    for (const Sign a : {Sign::Plus, Sign::Minus}) {
        for (const Sign b : {Sign::Plus, Sign::Minus}) {
            const Complex forward = oracle::bloch_correlator_numeric(p, env, a, b, dm);
            const Complex reversed = oracle::regression_integral(p, env, flip(a), flip(b),
                                                                 oracle::CorrelatorOrder::EarlyFirst,
                                                                 -sign_value(b) * dm);
            check_close(std::conj(forward), reversed, 1e-9);
        }
    }
}

TEST_CASE("effective model tracks the oracle in the weak-coupling limit") {
    app::ScenarioConfig c;
    double previous = 1.0;
    for (const double ratio : {0.1, 0.03, 0.01}) {
        const app::OracleComparison o = app::oracle_comparison(c, ratio);
        INFO("G/kappa_t = " << ratio);
        CHECK_FALSE(o.truncation_warning);
        CHECK(o.error_n < 0.05);
        CHECK(o.error_n < previous);
        previous = o.error_n;
    }
}

TEST_CASE("effective g1 and covariance follow the oracle") {
    app::ScenarioConfig c;
    c.N = 1.0;
    c.Omega_B = std::sqrt(c.kappa1 * c.kappa_t());
    c.G = 0.01 * c.kappa_t();
    const SingleModeRates r0 = c.setup().rates();
    c.gamma_0 = 2.0 * std::abs(r0.Omega0_prime) / std::sqrt(0.2);
    const SingleModeSetup s = c.setup();
    const SingleModeRates r = s.rates();
    const MomentSystem ms = build_moment_system(r, c.gamma_0, 0.0);
    const SteadyStateReport rep = steady_state(ms);
    REQUIRE(rep.v_ss);

    const oracle::Solution sol = oracle::solve({s.mode(), {s.tls()}, s.environment()}, oracle::HilbertSpec{10, 1, 64});
    CHECK(std::abs(sol.moments.Vx - rep.covariance.Vx) < 1e-3);
    CHECK(std::abs(sol.moments.Vp - rep.covariance.Vp) < 1e-3);

    std::vector<double> grid;
    const double tmax = 10.0 / ms.gamma_total;
    for (int k = 0; k <= 40; ++k) grid.push_back(tmax * k / 40.0);
    const std::vector<Complex> exact = oracle::coherence_g1(sol, grid);
    const CoherenceSeries eff = coherence_g1(ms, rep, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) worst = std::max(worst, std::abs(exact[k] - eff.g1[k]));
    CHECK(worst < 0.02);
}
