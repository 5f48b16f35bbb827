#pragma once

// Driven, lossy two-level-system bath: stationary Bloch state, Bloch
// coefficient matrix, fluctuation correlators and their one-sided spectral
// densities. Frequencies and rates are dimensionless (hbar = k_B = 1).

#include <cstddef>
#include <span>
#include <vector>

#include "tlsbath/numerics.hpp"

namespace tlsbath {

/// Sign label for sigma_+ / sigma_- and for the exponent of the one-sided
/// Fourier transform.
enum class Sign : int { Plus = 1, Minus = -1 };

inline constexpr double sign_value(Sign s) noexcept { return static_cast<double>(static_cast<int>(s)); }
inline constexpr Sign flip(Sign s) noexcept { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

struct TlsParams {
    double omega_B = 1.0;  // transition frequency
    double kappa1 = 0.0;   // decay rate
    double kappa2 = 0.0;   // pure dephasing rate
    Complex Omega_B{0.0, 0.0};
    std::vector<Complex> couplings;  // G_in, one per system mode

    void validate() const;
    bool operator==(const TlsParams&) const = default;
};

struct BathEnvironment {
    double temperature = 0.0;
    double omega_d = 1.0;  // common drive frequency of system and bath

    void validate() const;
};

struct BlochSteadyState {
    Complex sigma_plus;
    double sigma_z = -1.0;
    double saturation = 0.0;
    double kappa_t = 0.0;
    double Delta_B = 0.0;  // omega_B - omega_d
    double nbar = 0.0;
};

/// A bath as a list of groups of identical emitters. Identical members are
/// merged so that an ensemble of 1e5 equal TLS costs one evaluation.
class TlsEnsemble {
public:
    struct Group {
        TlsParams params;
        double count = 1.0;
    };

    TlsEnsemble() = default;

    /// `merge_identical = false` keeps one group per entry (explicit summation).
    static TlsEnsemble from_list(std::span<const TlsParams> members, bool merge_identical = true);
    static TlsEnsemble identical(double count, TlsParams params);

    const std::vector<Group>& groups() const noexcept { return groups_; }
    double size() const noexcept;
    std::size_t mode_count() const noexcept;

private:
    std::vector<Group> groups_;
};

/// Bose-Einstein occupation; exactly 0 at zero temperature.
double bose_occupation(double omega, double temperature);

/// tanh(omega / 2T) = 1 / (1 + 2 nbar); exactly 1 at zero temperature.
double thermal_tanh(double omega, double temperature);

double transverse_rate(const TlsParams& p, const BathEnvironment& env);
double saturation(const TlsParams& p, const BathEnvironment& env);
BlochSteadyState bloch_steady_state(const TlsParams& p, const BathEnvironment& env);

/// Coefficient matrix of the homogeneous Bloch equations in the basis
/// (sigma_+, sigma_-, sigma_z).
ComplexMatrix bloch_matrix(const TlsParams& p, const BathEnvironment& env);

/// <s_vec s_beta>_ss for centered Pauli operators, s_vec = (s_+, s_-, s_z).
ComplexVector same_time_correlators(const BlochSteadyState& b, Sign beta);

/// Integral over tau in [0, inf) of <s_vec(tau) s_beta(0)>_ss exp(beta i Delta_m tau),
/// evaluated through the resolvent of the Bloch matrix.
ComplexVector correlator_integral(const TlsParams& p, const BathEnvironment& env, Sign beta,
                                  double Delta_m);

/// One-sided spectral density Gamma_{alpha beta}^{mn}.
Complex psd(const TlsEnsemble& bath, const BathEnvironment& env, std::span<const double> detunings,
            Sign alpha, Sign beta, std::size_t m, std::size_t n);

/// All Gamma_{alpha beta}^{mn} for a set of modes, built with one resolvent
/// solve per (group, beta, m).
class PsdTable {
public:
    PsdTable(const TlsEnsemble& bath, const BathEnvironment& env, std::span<const double> detunings);

    Complex operator()(Sign alpha, Sign beta, std::size_t m, std::size_t n) const;
    std::size_t mode_count() const noexcept { return modes_; }

private:
    static std::size_t slot(Sign s) noexcept { return s == Sign::Plus ? 0 : 1; }

    std::size_t modes_ = 0;
    // entries_[alpha][beta] is a modes x modes matrix indexed (m, n)
    ComplexMatrix entries_[2][2];
};

}  // namespace tlsbath
