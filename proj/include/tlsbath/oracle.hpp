#pragma once

// Exact density-matrix treatment of one bosonic mode coupled to a few TLS,
// in the frame rotating at the common drive frequency. Used to check the
// effective single-mode theory at small N.

#include <cstddef>
#include <span>
#include <vector>

#include "tlsbath/numerics.hpp"
#include "tlsbath/rates.hpp"
#include "tlsbath/tls_bath.hpp"

namespace tlsbath::oracle {

inline constexpr std::size_t kDefaultDimensionCap = 64;
inline constexpr std::size_t kHardDimensionCap = 256;
inline constexpr double kLeakTolerance = 1e-8;

/// Mode + TLS parameters. Each TLS uses couplings[0] as its coupling to the mode.
struct FullModel {
    ModeParams mode;
    std::vector<TlsParams> tls;
    BathEnvironment env;
};

struct HilbertSpec {
    std::size_t fock_dim = 8;
    std::size_t n_tls = 1;
    std::size_t dimension_cap = kDefaultDimensionCap;

    std::size_t dimension() const noexcept { return fock_dim << n_tls; }
    /// Throws InvalidParameter on a malformed spec and DimensionCap when too large.
    void validate() const;
};

struct Liouvillian {
    HilbertSpec spec;
    ComplexMatrix matrix;  // dim^2 x dim^2, column-stacking vectorization

    std::size_t dimension() const noexcept { return spec.dimension(); }
};

/// Operators on mode (x) TLS_1 (x) ... (x) TLS_n. TLS basis index 0 is the excited state.
struct Operators {
    ComplexMatrix s;
    std::vector<ComplexMatrix> sigma_minus;
    std::vector<ComplexMatrix> sigma_z;
};

Operators make_operators(const HilbertSpec& spec);

Liouvillian build_liouvillian(const FullModel& model, const HilbertSpec& spec);

/// Kernel of the Liouvillian as a Hermitian, unit-trace density matrix.
/// Throws KernelDimension when the steady state is not unique.
ComplexMatrix steady_state_full(const Liouvillian& l);

/// rho(t) = exp(L t) rho0.
ComplexMatrix evolve(const Liouvillian& l, const ComplexMatrix& rho0, double t);

struct Expectations {
    Complex s{0.0, 0.0};
    double n = 0.0;
    Complex s2{0.0, 0.0};
    std::vector<Complex> sigma_plus;
    std::vector<double> sigma_z;
    double leak = 0.0;               // population of the top two Fock levels
    bool truncation_warning = false; // leak >= kLeakTolerance
    // Direct quadrature covariance from rho
    double Vx = 0.5;
    double Vp = 0.5;
    double Cxp = 0.0;
};

Expectations expectations(const ComplexMatrix& rho, const HilbertSpec& spec);

/// Coherent state |alpha> on the mode (normalized after truncation), TLS in the ground state.
ComplexMatrix coherent_state(const HilbertSpec& spec, Complex alpha);

struct Solution {
    HilbertSpec spec;
    Liouvillian liouvillian;
    ComplexMatrix rho;
    Expectations moments;
};

/// Steady state with the Fock dimension doubled from `spec.fock_dim` until the
/// truncation leak drops below kLeakTolerance or the dimension cap is reached.
/// At the cap the last solution is returned with its truncation warning set.
Solution solve(const FullModel& model, HilbertSpec spec);

/// g1(tau) = <s^dag(0) s(tau)> / <s^dag s> by quantum regression on the full state.
std::vector<Complex> coherence_g1(const Solution& solution, std::span<const double> tau_grid);

enum class CorrelatorOrder {
    LateFirst,   // <A(tau) B(0)>
    EarlyFirst,  // <B(0) A(tau)>
};

/// Integral over [0, inf) of the centered TLS correlator of A = s_late at tau and
/// B = s_early at 0, weighted by exp(i * rate * tau). Uses regression on the
/// 4-dimensional single-TLS Liouvillian with adaptive Gauss-Kronrod quadrature up
/// to 40 / (slowest decay rate) and an analytic tail.
Complex regression_integral(const TlsParams& p, const BathEnvironment& env, Sign late, Sign early,
                            CorrelatorOrder order, double rate);

/// Quadrature counterpart of correlator_integral(...)[alpha] for a given beta.
Complex bloch_correlator_numeric(const TlsParams& p, const BathEnvironment& env, Sign alpha,
                                 Sign beta, double Delta_m);

/// Single-TLS Liouvillian in the basis of the 2x2 density matrix (4x4).
ComplexMatrix tls_liouvillian(const TlsParams& p, const BathEnvironment& env);

}  // namespace tlsbath::oracle
