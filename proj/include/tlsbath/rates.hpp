#pragma once

// Effective master-equation rates for bosonic modes coupled to a driven TLS
// bath, plus the closed-form limits of the single-mode, identical-TLS case.
// The closed forms never call into the pipeline; tests compare the two.

#include <cstddef>
#include <span>
#include <vector>

#include "tlsbath/numerics.hpp"
#include "tlsbath/tls_bath.hpp"

namespace tlsbath {

struct ModeParams {
    double omega = 1.0;  // mode frequency
    double gamma = 0.0;  // intrinsic decay rate
    Complex Omega{0.0, 0.0};  // external drive

    void validate() const;
};

/// Full multi-mode rate set. Matrices are indexed (m, n).
struct MasterEqRates {
    ComplexVector Omega_prime;
    ComplexMatrix delta;
    ComplexMatrix g;
    ComplexMatrix gamma_plus;
    ComplexMatrix gamma_minus;
    ComplexMatrix Gamma;
};

struct SingleModeRates {
    Complex Omega0_prime{0.0, 0.0};
    double delta = 0.0;
    Complex g{0.0, 0.0};
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    double gamma = 0.0;  // gamma_minus - gamma_plus
    Complex Gamma{0.0, 0.0};
};

/// Omega'_n = Omega_n + sum_i G_in <sigma_+i>_ss.
ComplexVector effective_driving(std::span<const ModeParams> modes, const TlsEnsemble& bath,
                                const BathEnvironment& env);

/// Assembles every rate from the spectral-density table. Throws
/// HermiticityViolation if delta or gamma_pm fail M = M^dagger beyond round-off.
MasterEqRates assemble_rates(std::span<const ModeParams> modes, const TlsEnsemble& bath,
                             const BathEnvironment& env);

/// Diagonal entry `mode` of a multi-mode rate set, as real weights where the
/// physics demands it. Rejects imaginary residue above 1e-12 (relative).
SingleModeRates single_mode_rates(const MasterEqRates& rates, std::size_t mode = 0);

/// Table-I parameter set: one mode, N identical TLS.
struct SingleModeSetup {
    double tls_count = 1.0;
    Complex coupling{0.0, 0.0};  // G
    double omega_B = 1.0;
    double kappa1 = 1e-4;
    double kappa2 = 0.0;
    Complex Omega_B{0.0, 0.0};
    double omega_0 = 1.0;
    double gamma_0 = 0.0;
    Complex Omega_0{0.0, 0.0};
    double temperature = 0.0;
    double omega_d = 1.0;

    double Delta_0() const noexcept { return omega_0 - omega_d; }
    double Delta_B() const noexcept { return omega_B - omega_d; }

    TlsParams tls() const;
    ModeParams mode() const;
    BathEnvironment environment() const;
    TlsEnsemble ensemble() const;

    /// Pipeline evaluation: spectral densities -> rates -> single-mode view.
    SingleModeRates rates() const;
};

struct SqueezingRates {
    Complex g;
    Complex Gamma;
};

/// Closed-form (g, Gamma) for resonantly driven TLS (Delta_B = 0, kappa2 = 0,
/// T = 0, real G and Omega_B).
SqueezingRates resonant_closed_form(double N, double G, double kappa1, double s, double Delta_0);

/// |Omega'_0|^2 = (N|G|)^2 kappa1 / (4 kappa_t) * s / (1 + s)^2 (zero temperature, Omega_0 = 0).
double effective_driving_modulus_sq(double N, double G_abs, double kappa1, double kappa_t, double s);

struct DecayShift {
    double gamma;
    double delta;
};

/// s -> 0 limit of (gamma, delta): standard-tunneling-model Lorentzians.
DecayShift low_drive_limits(const SingleModeSetup& setup);

enum class HighDriveRegime {
    DetuningDominated,  // Delta_0 >> Omega_B >> kappa_t
    DriveDominated,     // Omega_B >> Delta_0 >> kappa_t (amplification)
    NearResonant,       // Omega_B >> kappa_t >> Delta_0
};

/// Asymptotic s -> infinity value of gamma in the given regime.
double high_drive_gamma_limit(const SingleModeSetup& setup, HighDriveRegime regime);

/// Mollow sideband frequency sqrt(|Omega_B|^2 - (kappa_t/2)^2).
/// Throws BelowThreshold when |Omega_B| <= kappa_t / 2.
double mollow_sideband(Complex Omega_B, double kappa_t);

/// Detuning of maximum coherent scattering, sqrt(|Omega_B|^2 / 2 - kappa_t^2).
/// Throws BelowThreshold when |Omega_B|^2 < 2 kappa_t^2.
double optimal_detuning(Complex Omega_B, double kappa_t);

}  // namespace tlsbath
