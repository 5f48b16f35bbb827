#include "tlsbath/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "tlsbath/errors.hpp"

namespace tlsbath::num {

namespace {

bool all_finite(const Complex* data, Eigen::Index n) {
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!std::isfinite(data[k].real()) || !std::isfinite(data[k].imag())) return false;
    }
    return true;
}

void require_square(const ComplexMatrix& a, const char* what) {
    if (a.rows() < 1 || a.rows() != a.cols()) {
        throw InvalidParameter(std::string(what) + ": matrix must be square and non-empty");
    }
}

}  // namespace

double inf_norm(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

double inf_norm(const ComplexVector& v) {
    if (v.size() == 0) return 0.0;
    return v.cwiseAbs().maxCoeff();
}

void require_finite(const ComplexMatrix& a, const char* what) {
    if (!all_finite(a.data(), a.size())) {
        throw NonFiniteValue(std::string(what) + ": non-finite matrix entry");
    }
}

void require_finite(const ComplexVector& v, const char* what) {
    if (!all_finite(v.data(), v.size())) {
        throw NonFiniteValue(std::string(what) + ": non-finite vector entry");
    }
}

ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b) {
    require_square(a, "solve_linear");
    if (b.size() != a.rows()) throw InvalidParameter("solve_linear: dimension mismatch");
    require_finite(a, "solve_linear");
    require_finite(b, "solve_linear");

    const double norm = inf_norm(a);
    if (norm == 0.0) throw SingularMatrix("solve_linear: zero matrix");

    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    const auto& factors = lu.matrixLU();
    const double threshold = kPivotTolerance * norm;
    for (Eigen::Index k = 0; k < factors.rows(); ++k) {
        if (std::abs(factors(k, k)) < threshold) {
            throw SingularMatrix("solve_linear: pivot " + std::to_string(k) +
                                 " below threshold (degenerate parameters?)");
        }
    }

    ComplexVector x = lu.solve(b);
    const ComplexVector residual = b - a * x;
    x += lu.solve(residual);
    return x;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& a) {
    require_square(a, "eigenvalues");
    require_finite(a, "eigenvalues");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("eigenvalues: QR iteration did not converge");
    }
    const auto& values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

EigenDecomposition eigen_decompose(const ComplexMatrix& a) {
    require_square(a, "eigen_decompose");
    require_finite(a, "eigen_decompose");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("eigen_decompose: QR iteration did not converge");
    }
    EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};

    const double scale = std::max(inf_norm(a), 1e-300);
    for (Eigen::Index k = 0; k < out.values.size(); ++k) {
        const ComplexVector v = out.vectors.col(k);
        const double r = inf_norm(ComplexVector(a * v - out.values[k] * v));
        if (r > kEigenResidualTolerance * scale * inf_norm(v)) {
            throw NoConvergence("eigen_decompose: eigenpair residual above tolerance");
        }
    }
    return out;
}

double spectral_abscissa(const ComplexMatrix& a) {
    const auto values = eigenvalues(a);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : values) best = std::max(best, v.real());
    return best;
}

ComplexMatrix expm(const ComplexMatrix& a, double t) {
    require_square(a, "expm");
    require_finite(a, "expm");
    if (!std::isfinite(t)) throw NonFiniteValue("expm: non-finite time");
    if (t == 0.0) return ComplexMatrix::Identity(a.rows(), a.cols());
    const ComplexMatrix scaled = a * t;
    ComplexMatrix out = scaled.exp();
    require_finite(out, "expm");
    return out;
}

ComplexVector expm_apply(const ComplexMatrix& a, const ComplexVector& v, double t) {
    if (t < 0.0) throw InvalidParameter("expm_apply: negative time");
    if (v.size() != a.cols()) throw InvalidParameter("expm_apply: dimension mismatch");
    require_finite(v, "expm_apply");
    if (t == 0.0) return v;
    return expm(a, t) * v;
}

ComplexVector null_vector(const ComplexMatrix& a) {
    require_square(a, "null_vector");
    require_finite(a, "null_vector");
    const Eigen::Index n = a.rows();
    const double norm = inf_norm(a);
    if (n == 1) {
        if (std::abs(a(0, 0)) > kNullTolerance * norm) {
            throw KernelDimension("null_vector: kernel is empty");
        }
        return ComplexVector::Ones(1);
    }
    if (norm == 0.0) throw KernelDimension("null_vector: zero matrix has a full kernel");

    Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();  // descending
    const double threshold = kNullTolerance * norm;
    if (sigma[n - 2] <= threshold) {
        throw KernelDimension("null_vector: kernel dimension exceeds one (non-unique steady state)");
    }

    ComplexVector v = svd.matrixV().col(n - 1);
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    v *= std::conj(v[pivot]) / std::abs(v[pivot]);

    const double residual = inf_norm(ComplexVector(a * v));
    if (residual > kNullTolerance * norm * inf_norm(v)) {
        throw KernelDimension("null_vector: kernel is empty (smallest singular value " +
                              std::to_string(sigma[n - 1]) + ")");
    }
    return v;
}

}  // namespace tlsbath::num
