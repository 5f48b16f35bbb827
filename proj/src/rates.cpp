#include "tlsbath/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tlsbath/errors.hpp"

namespace tlsbath {

namespace {

constexpr double kHermiticityTolerance = 1e-10;
constexpr double kImaginaryResidueTolerance = 1e-12;

void require_hermitian(const ComplexMatrix& m, const char* name) {
    const double scale = num::inf_norm(m);
    const double defect = num::inf_norm(ComplexMatrix(m - m.adjoint()));
    if (defect > kHermiticityTolerance * scale) {
        throw HermiticityViolation(std::string(name) + " is not Hermitian (defect " +
                                   std::to_string(defect) + ")");
    }
}

double real_weight(Complex z, const char* name) {
    if (std::abs(z.imag()) > kImaginaryResidueTolerance * std::max(std::abs(z), 1e-300)) {
        throw HermiticityViolation(std::string(name) + " has an imaginary residue");
    }
    return z.real();
}

}  // namespace

void ModeParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidParameter("mode omega must be > 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidParameter("mode gamma must be >= 0");
    if (!std::isfinite(Omega.real()) || !std::isfinite(Omega.imag())) {
        throw InvalidParameter("mode drive must be finite");
    }
}

ComplexVector effective_driving(std::span<const ModeParams> modes, const TlsEnsemble& bath,
                                const BathEnvironment& env) {
    if (modes.size() != bath.mode_count()) {
        throw InvalidParameter("effective_driving: TLS couplings do not match the mode count");
    }
    ComplexVector out(static_cast<Eigen::Index>(modes.size()));
    for (std::size_t n = 0; n < modes.size(); ++n) {
        modes[n].validate();
        out[static_cast<Eigen::Index>(n)] = modes[n].Omega;
    }
    for (const auto& group : bath.groups()) {
        const Complex sp = bloch_steady_state(group.params, env).sigma_plus;
        for (std::size_t n = 0; n < modes.size(); ++n) {
            out[static_cast<Eigen::Index>(n)] += group.count * group.params.couplings[n] * sp;
        }
    }
    return out;
}

MasterEqRates assemble_rates(std::span<const ModeParams> modes, const TlsEnsemble& bath,
                             const BathEnvironment& env) {
    const auto count = static_cast<Eigen::Index>(modes.size());
    std::vector<double> detunings;
    detunings.reserve(modes.size());
    for (const auto& mode : modes) detunings.push_back(mode.omega - env.omega_d);

    const PsdTable table(bath, env, detunings);
    const auto at = [&](Sign a, Sign b, Eigen::Index m, Eigen::Index n) {
        return table(a, b, static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    };
    constexpr Sign P = Sign::Plus;
    constexpr Sign M = Sign::Minus;

    MasterEqRates r;
    r.Omega_prime = effective_driving(modes, bath, env);
    r.delta.resize(count, count);
    r.g.resize(count, count);
    r.gamma_plus.resize(count, count);
    r.gamma_minus.resize(count, count);
    r.Gamma.resize(count, count);

    for (Eigen::Index m = 0; m < count; ++m) {
        for (Eigen::Index n = 0; n < count; ++n) {
            const Complex mixed_mn = at(P, M, m, n) + at(M, P, m, n);
            const Complex mixed_nm = at(P, M, n, m) + at(M, P, n, m);
            r.delta(m, n) = -0.5 * kI * mixed_mn + 0.5 * kI * std::conj(mixed_nm);
            r.g(m, n) = -0.5 * kI * (at(P, P, m, n) - std::conj(at(M, M, n, m)));
            r.gamma_plus(m, n) = at(P, M, m, n) + std::conj(at(P, M, n, m));
            r.gamma_minus(m, n) = at(M, P, m, n) + std::conj(at(M, P, n, m));
            r.Gamma(m, n) = at(P, P, m, n) + std::conj(at(M, M, n, m));
        }
    }

    require_hermitian(r.delta, "delta");
    require_hermitian(r.gamma_plus, "gamma_plus");
    require_hermitian(r.gamma_minus, "gamma_minus");
    return r;
}

SingleModeRates single_mode_rates(const MasterEqRates& rates, std::size_t mode) {
    const auto k = static_cast<Eigen::Index>(mode);
    if (k >= rates.Omega_prime.size()) throw InvalidParameter("single_mode_rates: mode out of range");
    SingleModeRates s;
    s.Omega0_prime = rates.Omega_prime[k];
    s.delta = real_weight(rates.delta(k, k), "delta");
    s.g = rates.g(k, k);
    s.gamma_plus = real_weight(rates.gamma_plus(k, k), "gamma_plus");
    s.gamma_minus = real_weight(rates.gamma_minus(k, k), "gamma_minus");
    s.gamma = s.gamma_minus - s.gamma_plus;
    s.Gamma = rates.Gamma(k, k);
    return s;
}

TlsParams SingleModeSetup::tls() const {
    TlsParams p;
    p.omega_B = omega_B;
    p.kappa1 = kappa1;
    p.kappa2 = kappa2;
    p.Omega_B = Omega_B;
    p.couplings = {coupling};
    return p;
}

ModeParams SingleModeSetup::mode() const { return ModeParams{omega_0, gamma_0, Omega_0}; }

BathEnvironment SingleModeSetup::environment() const { return BathEnvironment{temperature, omega_d}; }

TlsEnsemble SingleModeSetup::ensemble() const { return TlsEnsemble::identical(tls_count, tls()); }

SingleModeRates SingleModeSetup::rates() const {
    const ModeParams modes[] = {mode()};
    return single_mode_rates(assemble_rates(modes, ensemble(), environment()));
}

SqueezingRates resonant_closed_form(double N, double G, double kappa1, double s, double Delta_0) {
    const Complex z = kI * (Delta_0 / kappa1);
    const Complex f = (s + 2.0 * (z - 1.0) * (z - 0.5)) * (z - 0.5);
    const Complex prefactor = N * G * G / (2.0 * kappa1) * (-s) / ((1.0 + s) * (1.0 + s) * f);
    return {prefactor * kI * (z - 1.0) * (1.0 + s),
            prefactor * (s * s + 2.0 * s + 4.0 * (z - 1.0) * (z - 1.0))};
}

double effective_driving_modulus_sq(double N, double G_abs, double kappa1, double kappa_t, double s) {
    const double ng = N * G_abs;
    return ng * ng * kappa1 / (4.0 * kappa_t) * s / ((1.0 + s) * (1.0 + s));
}

DecayShift low_drive_limits(const SingleModeSetup& setup) {
    const double kt = transverse_rate(setup.tls(), setup.environment());
    const double detuning = setup.omega_0 - setup.omega_B;
    const double weight = setup.tls_count * std::norm(setup.coupling) /
                          (kt * kt + detuning * detuning) *
                          thermal_tanh(setup.omega_B, setup.temperature);
    return {weight * 2.0 * kt, weight * detuning};
}

double high_drive_gamma_limit(const SingleModeSetup& setup, HighDriveRegime regime) {
    const double prefactor = setup.tls_count * std::norm(setup.coupling) * setup.kappa1;
    const double drive_sq = std::norm(setup.Omega_B);
    switch (regime) {
        case HighDriveRegime::DetuningDominated: {
            const double d = setup.Delta_0();
            return prefactor / (d * d);
        }
        case HighDriveRegime::DriveDominated:
            return -prefactor / drive_sq;
        case HighDriveRegime::NearResonant: {
            const double kt = transverse_rate(setup.tls(), setup.environment());
            const double coth = 1.0 / thermal_tanh(setup.omega_B, setup.temperature);
            return prefactor * 2.0 * setup.kappa1 * kt / (drive_sq * drive_sq) * coth;
        }
    }
    throw InvalidParameter("high_drive_gamma_limit: unknown regime");
}

double mollow_sideband(Complex Omega_B, double kappa_t) {
    const double drive = std::abs(Omega_B);
    const double half = 0.5 * kappa_t;
    if (drive < half) {
        throw BelowThreshold("no resolved Mollow sidebands: |Omega_B| <= kappa_t/2");
    }
    return std::sqrt(drive * drive - half * half);
}

double optimal_detuning(Complex Omega_B, double kappa_t) {
    const double arg = 0.5 * std::norm(Omega_B) - kappa_t * kappa_t;
    if (arg < 0.0) throw BelowThreshold("single-peaked regime: |Omega_B|^2 < 2 kappa_t^2");
    return std::sqrt(arg);
}

}  // namespace tlsbath
