// Randomized invariants. Fixed seeds keep failures reproducible.
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "test_helpers.hpp"
#include "tlsbath/mode_dynamics.hpp"
#include "tlsbath/oracle.hpp"
#include "tlsbath/rates.hpp"

#include <Eigen/Eigenvalues>

using namespace tlsbath;

namespace {

struct Draw {
    std::mt19937_64 rng;
    explicit Draw(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    Complex phase(double r) { return std::polar(r, uniform(0.0, 2.0 * std::numbers::pi)); }
};

SingleModeSetup random_setup(Draw& d) {
    SingleModeSetup s;
    s.tls_count = d.log_uniform(1.0, 1e6);
    s.coupling = d.phase(d.log_uniform(1e-10, 1e-7));
    s.kappa1 = d.log_uniform(1e-5, 1e-3);
    s.kappa2 = d.uniform(0.0, 1.0) < 0.5 ? 0.0 : d.log_uniform(1e-6, 1e-3);
    s.Omega_B = d.phase(d.log_uniform(1e-6, 1e-2));
    s.omega_B = 1.0 + d.uniform(-1e-3, 1e-3);
    s.omega_0 = 1.0 + d.uniform(-1e-3, 1e-3);
    s.gamma_0 = d.log_uniform(1e-9, 1e-5);
    s.Omega_0 = d.uniform(0.0, 1.0) < 0.5 ? Complex(0.0) : d.phase(d.log_uniform(1e-10, 1e-6));
    s.temperature = d.uniform(0.0, 1.0) < 0.5 ? 0.0 : d.uniform(0.05, 2.0);
    return s;
}

}  // namespace

TEST_CASE("rates: emission and absorption are non-negative, PSD is additive") {
    Draw d(0x9e3779b97f4a7c15ull);
    for (int trial = 0; trial < 200; ++trial) {
        const SingleModeSetup s = random_setup(d);
        const SingleModeRates r = s.rates();
        const double scale = s.tls_count * std::norm(s.coupling) / s.kappa1;
        CHECK(r.gamma_plus >= -1e-10 * scale);
        CHECK(r.gamma_minus >= -1e-10 * scale);
        CHECK(r.gamma == doctest::Approx(r.gamma_minus - r.gamma_plus));
    }
}

TEST_CASE("steady state: residual and conjugation invariants whenever stable") {
    Draw d(42);
    int stable = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const SingleModeSetup s = random_setup(d);
        const SingleModeRates r = s.rates();
        const MomentSystem ms = build_moment_system(r, s.gamma_0, s.Delta_0(), bose_occupation(s.omega_0, s.temperature));
        const SteadyStateReport rep = steady_state(ms);
        CHECK(rep.verdict.stable == rep.v_ss.has_value());
        if (!rep.v_ss) continue;
        ++stable;
        const double scale = std::max(1.0, rep.v_ss->cwiseAbs().maxCoeff()) * num::inf_norm(ms.drift);
        CHECK(rep.residual <= 1e-10 * scale);
        CHECK(rep.conjugation_ok);
        CHECK(rep.heisenberg_ok);
        CHECK(rep.occupation_ok);
    }
    CHECK(stable > 100);
}

TEST_CASE("oracle: random small models give physical steady states") {
    Draw d(7);
    for (int trial = 0; trial < 12; ++trial) {
        TlsParams p;
        p.omega_B = 1.0 + d.uniform(-0.1, 0.1);
        p.kappa1 = d.uniform(0.02, 0.3);
        p.kappa2 = d.uniform(0.0, 0.05);
        p.Omega_B = d.phase(d.uniform(0.0, 0.4));
        p.couplings = {d.phase(d.uniform(0.0, 0.1))};
        const oracle::FullModel m{ModeParams{1.0 + d.uniform(-0.1, 0.1), d.uniform(0.05, 0.3), d.phase(0.05)},
                                  {p},
                                  BathEnvironment{d.uniform(0.0, 0.5), 1.0 + d.uniform(-0.05, 0.05)}};
        const oracle::HilbertSpec spec{5, 1, 64};
        const oracle::Liouvillian l = oracle::build_liouvillian(m, spec);
        const ComplexMatrix rho = oracle::steady_state_full(l);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
        CHECK((rho - rho.adjoint()).norm() < 1e-12);
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
        CHECK((rho * rho).trace().real() <= 1.0 + 1e-10);
        const ComplexMatrix later = oracle::evolve(l, oracle::coherent_state(spec, d.phase(0.3)), 1.5);
        CHECK(std::abs(later.trace() - 1.0) < 1e-12);
    }
}
