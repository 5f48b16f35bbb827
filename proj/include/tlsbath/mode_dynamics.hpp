#pragma once

// Single-mode moment dynamics. The state vector is
// v = (<s^dag s>, <s>, <s^dag>, <s^2>, <s^dag 2>) and obeys dv/dt = A v + a.

#include <optional>
#include <span>
#include <vector>

#include "tlsbath/numerics.hpp"
#include "tlsbath/rates.hpp"

namespace tlsbath {

inline constexpr double kStabilityMargin = 1e-12;

struct MomentSystem {
    ComplexMatrix drift;         // 5x5
    ComplexVector inhomogeneity; // 5
    double Delta_prime = 0.0;    // Delta_0 + delta
    double gamma_total = 0.0;    // gamma_0 + gamma
    Complex g{0.0, 0.0};
};

/// `n_thermal` is the occupation of the mode's own reservoir; it adds
/// gamma_0 * n_thermal to the number equation and is 0 at zero temperature.
MomentSystem build_moment_system(const SingleModeRates& rates, double gamma_0, double Delta_0,
                                 double n_thermal = 0.0);

struct StabilityVerdict {
    bool stable = false;          // max Re lambda < kStabilityMargin
    double max_re = 0.0;
    bool criterion_holds = false; // 4|g| - gamma_total < kStabilityMargin
};

StabilityVerdict stability(const MomentSystem& ms);

struct Covariance {
    double Vx = 0.5;
    double Vp = 0.5;
    double Cxp = 0.0;

    double determinant() const noexcept { return Vx * Vp - Cxp * Cxp; }
    double min_eigenvalue() const noexcept;
};

struct SteadyStateReport {
    StabilityVerdict verdict;
    std::optional<ComplexVector> v_ss;  // empty when unstable
    // Centered moments <ds^dag ds> and <ds^2>, solved directly so that large
    // coherent amplitudes do not cancel.
    double centered_occupation = 0.0;
    Complex centered_m2{0.0, 0.0};
    Covariance covariance;
    double xi = 1.0;
    double residual = 0.0;  // ||A v + a||_inf

    bool heisenberg_ok = false;   // det sigma >= 1/4 - 1e-9
    bool occupation_ok = false;   // centered occupation >= -1e-9
    bool conjugation_ok = false;  // v[1] = conj v[2], v[3] = conj v[4], v[0] real
    bool positive_definite = false;

    bool stable() const noexcept { return verdict.stable; }
};

SteadyStateReport steady_state(const MomentSystem& ms);

struct ApproxSteadyState {
    double n;
    Complex s_dag;
};

/// n = gamma_+/gamma_t + 4|Omega'|^2/gamma_t^2, <s^dag> = 2i Omega'/gamma_t with
/// gamma_t = gamma_0 + gamma. Throws InvalidParameter unless gamma_t > 0.
ApproxSteadyState approx_steady_state(const SingleModeRates& rates, double gamma_0);

struct CoherenceSeries {
    std::vector<double> tau;
    std::vector<Complex> g1;
};

/// 0 followed by `points - 1` log-spaced times from 1e-4 * tau_max to tau_max.
std::vector<double> default_tau_grid(double gamma_total, std::size_t points = 400,
                                     double span_in_lifetimes = 20.0);

/// g1(tau) = <s^dag(0) s(tau)> / <s^dag s> by quantum regression. Throws
/// UnstableSystem if the report carries no steady state.
CoherenceSeries coherence_g1(const MomentSystem& ms, const SteadyStateReport& report,
                             std::span<const double> tau_grid);

/// Solution of dv/dt = A v + a at time t >= 0 from v0.
ComplexVector evolve_moments(const MomentSystem& ms, const ComplexVector& v0, double t);

}  // namespace tlsbath
