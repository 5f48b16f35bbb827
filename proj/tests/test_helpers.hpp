#pragma once

#include <complex>

#include <doctest.h>

inline void check_close(std::complex<double> a, std::complex<double> b, double tol) {
    INFO("got " << a << ", expected " << b);
    CHECK(std::abs(a - b) <= tol * std::max(1.0, std::abs(b)));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
