#pragma once

// Dense complex linear algebra used throughout the library. Physics-path
// matrices are 2x2 to 5x5; the exact oracle reaches a few thousand rows.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace tlsbath {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

namespace num {

/// Pivots below this fraction of the infinity norm are treated as zero.
inline constexpr double kPivotTolerance = 1e-14;
/// Eigenpair residual bound, relative to the infinity norm.
inline constexpr double kEigenResidualTolerance = 1e-9;
/// Null-vector acceptance: ||A v|| <= kNullTolerance * ||A|| * ||v||.
inline constexpr double kNullTolerance = 1e-10;

double inf_norm(const ComplexMatrix& a);
double inf_norm(const ComplexVector& v);

/// Throws NonFiniteValue if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& a, const char* what);
void require_finite(const ComplexVector& v, const char* what);

/// Solves A x = b by LU with partial pivoting and one step of iterative
/// refinement. Throws SingularMatrix when a pivot falls below
/// kPivotTolerance * ||A||_inf.
ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b);

/// All eigenvalues, with algebraic multiplicity, in the order returned by the
/// Schur decomposition. Throws NoConvergence if the QR iteration stalls.
std::vector<Complex> eigenvalues(const ComplexMatrix& a);

struct EigenDecomposition {
    ComplexVector values;
    ComplexMatrix vectors;  // column k pairs with values[k]
};

/// Eigenvalues and eigenvectors; every pair is checked against
/// ||A v - lambda v|| <= kEigenResidualTolerance * ||A|| * ||v||.
EigenDecomposition eigen_decompose(const ComplexMatrix& a);

/// Largest real part of the spectrum.
double spectral_abscissa(const ComplexMatrix& a);

/// exp(A t) as a dense matrix (Pade approximant with scaling and squaring).
ComplexMatrix expm(const ComplexMatrix& a, double t);

/// exp(A t) v. Returns v unchanged for t == 0.
ComplexVector expm_apply(const ComplexMatrix& a, const ComplexVector& v, double t);

/// Right singular vector of the smallest singular value, normalised so that
/// its largest-modulus entry is real and positive.
/// Throws KernelDimension when the kernel is numerically empty or when the two
/// smallest singular values are both below the threshold.
ComplexVector null_vector(const ComplexMatrix& a);

}  // namespace num
}  // namespace tlsbath
