#include "tlsbath/mode_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tlsbath/errors.hpp"

namespace tlsbath {

namespace {

constexpr double kPhysicalityTolerance = 1e-9;
constexpr double kConjugationTolerance = 1e-10;

bool conjugation_holds(const ComplexVector& v) {
    const double scale = std::max(num::inf_norm(v), 1.0);
    return std::abs(v[0].imag()) <= kConjugationTolerance * scale &&
           std::abs(v[1] - std::conj(v[2])) <= kConjugationTolerance * scale &&
           std::abs(v[3] - std::conj(v[4])) <= kConjugationTolerance * scale;
}

}  // namespace

double Covariance::min_eigenvalue() const noexcept {
    const double mean = 0.5 * (Vx + Vp);
    const double half_diff = 0.5 * (Vx - Vp);
    return mean - std::hypot(half_diff, Cxp);
}

MomentSystem build_moment_system(const SingleModeRates& rates, double gamma_0, double Delta_0,
                                 double n_thermal) {
    MomentSystem ms;
    ms.Delta_prime = Delta_0 + rates.delta;
    ms.gamma_total = gamma_0 + rates.gamma;
    ms.g = rates.g;

    const Complex dt = kI * ms.Delta_prime - 0.5 * ms.gamma_total;
    const Complex dtc = std::conj(dt);
    const Complex w = rates.Omega0_prime;
    const Complex wc = std::conj(w);
    const Complex g = rates.g;
    const Complex gc = std::conj(g);
    const Complex G = rates.Gamma;

    ms.drift.resize(5, 5);
    ms.drift << -ms.gamma_total, kI * w, -kI * wc, 2.0 * kI * g, -2.0 * kI * gc,
                0.0, dtc, -2.0 * kI * gc, 0.0, 0.0,
                0.0, 2.0 * kI * g, dt, 0.0, 0.0,
                -4.0 * kI * gc, -2.0 * kI * wc, 0.0, 2.0 * dtc, 0.0,
                4.0 * kI * g, 0.0, 2.0 * kI * w, 0.0, 2.0 * dt;

    ms.inhomogeneity.resize(5);
    ms.inhomogeneity << rates.gamma_plus + gamma_0 * n_thermal, -kI * wc, kI * w,
                        -2.0 * kI * gc - std::conj(G), 2.0 * kI * g - G;
    return ms;
}

StabilityVerdict stability(const MomentSystem& ms) {
    StabilityVerdict v;
    v.max_re = num::spectral_abscissa(ms.drift);
    v.stable = v.max_re < kStabilityMargin;
    v.criterion_holds = 4.0 * std::abs(ms.g) - ms.gamma_total < kStabilityMargin;
    return v;
}

SteadyStateReport steady_state(const MomentSystem& ms) {
    SteadyStateReport r;
    r.verdict = stability(ms);
    if (!r.verdict.stable) {
        r.xi = std::numeric_limits<double>::quiet_NaN();
        return r;
    }

    const ComplexVector v = -num::solve_linear(ms.drift, ms.inhomogeneity);
    r.residual = num::inf_norm(ComplexVector(ms.drift * v + ms.inhomogeneity));
    r.conjugation_ok = conjugation_holds(v);
    r.v_ss = v;

    // The centered second moments obey the second-order block with the drive removed.
    const int idx[3] = {0, 3, 4};
    ComplexMatrix block(3, 3);
    ComplexVector rhs(3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) block(i, j) = ms.drift(idx[i], idx[j]);
        rhs[i] = ms.inhomogeneity[idx[i]];
    }
    const ComplexVector centered = -num::solve_linear(block, rhs);
    r.centered_occupation = centered[0].real();
    r.centered_m2 = 0.5 * (centered[1] + std::conj(centered[2]));

    const double c = r.centered_occupation;
    r.covariance.Vx = 0.5 + r.centered_m2.real() + c;
    r.covariance.Vp = 0.5 - r.centered_m2.real() + c;
    r.covariance.Cxp = r.centered_m2.imag();

    const double lambda_min = r.covariance.min_eigenvalue();
    r.positive_definite = lambda_min > 0.0;
    r.xi = r.positive_definite ? 1.0 / std::sqrt(2.0 * lambda_min)
                               : std::numeric_limits<double>::infinity();
    r.heisenberg_ok = r.covariance.determinant() >= 0.25 - kPhysicalityTolerance;
    r.occupation_ok = c >= -kPhysicalityTolerance;
    return r;
}

ApproxSteadyState approx_steady_state(const SingleModeRates& rates, double gamma_0) {
    const double gt = gamma_0 + rates.gamma;
    if (!(gt > 0.0)) throw InvalidParameter("approx_steady_state: gamma_0 + gamma must be > 0");
    return {rates.gamma_plus / gt + 4.0 * std::norm(rates.Omega0_prime) / (gt * gt),
            2.0 * kI * rates.Omega0_prime / gt};
}

std::vector<double> default_tau_grid(double gamma_total, std::size_t points, double span_in_lifetimes) {
    if (!(gamma_total > 0.0)) throw InvalidParameter("default_tau_grid: gamma_total must be > 0");
    if (points < 2) throw InvalidParameter("default_tau_grid: need at least 2 points");
    const double tau_max = span_in_lifetimes / gamma_total;
    const double lo = std::log(1e-4 * tau_max);
    const double hi = std::log(tau_max);
    std::vector<double> grid{0.0};
    const std::size_t rest = points - 1;
    for (std::size_t k = 0; k < rest; ++k) {
        const double f = rest == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(rest - 1);
        grid.push_back(std::exp(lo + f * (hi - lo)));
    }
    return grid;
}

CoherenceSeries coherence_g1(const MomentSystem& ms, const SteadyStateReport& report,
                             std::span<const double> tau_grid) {
    if (!report.v_ss) throw UnstableSystem("coherence_g1: system is linearly unstable");
    const ComplexVector& v = *report.v_ss;
    const double n = v[0].real();
    if (!(n > 0.0)) throw InvalidParameter("coherence_g1: steady-state occupation is zero");

    const ComplexMatrix m = ms.drift.block(1, 1, 2, 2);
    const Complex s_dag = v[2];
    ComplexVector fixed(2);
    fixed << s_dag * v[1], s_dag * v[2];
    // (C, D)(0) - fixed point = centered (<ds^dag ds>, <ds^dag 2>)
    ComplexVector offset(2);
    offset << report.centered_occupation, std::conj(report.centered_m2);

    CoherenceSeries out;
    out.tau.assign(tau_grid.begin(), tau_grid.end());
    out.g1.reserve(tau_grid.size());
    for (const double tau : tau_grid) {
        if (tau == 0.0) {
            out.g1.emplace_back(1.0, 0.0);
            continue;
        }
        const ComplexVector x = num::expm_apply(m, offset, tau);
        out.g1.push_back((fixed[0] + x[0]) / n);
    }
    return out;
}

ComplexVector evolve_moments(const MomentSystem& ms, const ComplexVector& v0, double t) {
    if (v0.size() != 5) throw InvalidParameter("evolve_moments: state must have 5 entries");
    if (t < 0.0) throw InvalidParameter("evolve_moments: negative time");
    if (t == 0.0) return v0;
    ComplexMatrix augmented = ComplexMatrix::Zero(6, 6);
    augmented.topLeftCorner(5, 5) = ms.drift;
    augmented.topRightCorner(5, 1) = ms.inhomogeneity;
    ComplexVector x(6);
    x << v0, 1.0;
    return num::expm_apply(augmented, x, t).head(5);
}

}  // namespace tlsbath
