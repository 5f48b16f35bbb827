#include <cmath>
#include <limits>

#include <doctest.h>

#include "test_helpers.hpp"
#include "tlsbath/errors.hpp"
#include "tlsbath/numerics.hpp"

using namespace tlsbath;

TEST_CASE("solve_linear recovers a known solution") {
    ComplexMatrix a(3, 3);
    a << 4, 1, 0, kI, 3, 1, 0, 2, 5.0 - kI;
    ComplexVector x(3);
    x << 1.0, -2.0 + kI, 0.5;
    const ComplexVector b = a * x;
    const ComplexVector got = num::solve_linear(a, b);
    CHECK((got - x).norm() < 1e-13);
}

TEST_CASE("solve_linear rejects singular and non-finite input") {
    ComplexMatrix a(2, 2);
    a << 1, 2, 2, 4;
    ComplexVector b(2);
    b << 1, 1;
    CHECK_THROWS_AS(num::solve_linear(a, b), SingularMatrix);
    a << 1, 0, 0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(num::solve_linear(a, b), NonFiniteValue);
}

TEST_CASE("eigenvalues and spectral abscissa of a triangular matrix") {
    ComplexMatrix a(3, 3);
    a << -1.0, 5.0, 2.0, 0.0, -0.25 + kI, 1.0, 0.0, 0.0, -3.0;
    CHECK(num::spectral_abscissa(a) == doctest::Approx(-0.25).epsilon(1e-12));
    const auto d = num::eigen_decompose(a);
    for (Eigen::Index k = 0; k < 3; ++k) {
        CHECK((a * d.vectors.col(k) - d.values[k] * d.vectors.col(k)).norm() < 1e-12);
    }
}

TEST_CASE("expm: identity at t = 0, nilpotent and rotation generators") {
    ComplexMatrix n(2, 2);
    n << 0, 1, 0, 0;
    CHECK((num::expm(n, 0.0) - ComplexMatrix::Identity(2, 2)).norm() == 0.0);
    ComplexMatrix expected(2, 2);
    expected << 1, 2.5, 0, 1;
    CHECK((num::expm(n, 2.5) - expected).norm() < 1e-14);

    ComplexMatrix r(2, 2);
    r << 0, -1, 1, 0;
    const double t = 0.7;
    expected << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    CHECK((num::expm(r, t) - expected).norm() < 1e-14);

    ComplexVector v(2);
    v << 1.0, kI;
    CHECK((num::expm_apply(r, v, t) - expected * v).norm() < 1e-14);
}

TEST_CASE("null_vector finds a one-dimensional kernel and rejects others") {
    ComplexMatrix a(3, 3);
    a << 1, 2, 3, 0, 1, 1, 1, 3, 4;  // row 3 = row 1 + row 2
    const ComplexVector v = num::null_vector(a);
    CHECK(v.norm() > 0.0);
    CHECK((a * v).norm() < 1e-12 * v.norm());

    CHECK_THROWS_AS(num::null_vector(ComplexMatrix::Identity(3, 3)), KernelDimension);
    ComplexMatrix b = ComplexMatrix::Zero(3, 3);
    b(0, 0) = 1.0;
    CHECK_THROWS_AS(num::null_vector(b), KernelDimension);
}
