#include "tlsbath/tls_bath.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tlsbath/errors.hpp"

namespace tlsbath {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Complex coupling_with_sign(const TlsParams& p, std::size_t mode, Sign s) {
    const Complex g = p.couplings[mode];
    return s == Sign::Plus ? g : std::conj(g);
}

}  // namespace

void TlsParams::validate() const {
    if (!(omega_B > 0.0) || !std::isfinite(omega_B)) throw InvalidParameter("TLS omega_B must be > 0");
    if (!(kappa1 > 0.0) || !std::isfinite(kappa1)) throw InvalidParameter("TLS kappa1 must be > 0");
    if (!(kappa2 >= 0.0) || !std::isfinite(kappa2)) throw InvalidParameter("TLS kappa2 must be >= 0");
    if (!finite(Omega_B)) throw InvalidParameter("TLS Omega_B must be finite");
    if (couplings.empty()) throw InvalidParameter("TLS needs one coupling per system mode");
    for (const auto& g : couplings) {
        if (!finite(g)) throw InvalidParameter("TLS couplings must be finite");
    }
}

void BathEnvironment::validate() const {
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw InvalidParameter("temperature must be >= 0");
    }
    if (!(omega_d > 0.0) || !std::isfinite(omega_d)) throw InvalidParameter("omega_d must be > 0");
}

TlsEnsemble TlsEnsemble::from_list(std::span<const TlsParams> members, bool merge_identical) {
    if (members.empty()) throw InvalidParameter("TLS ensemble must not be empty");
    TlsEnsemble out;
    const std::size_t modes = members.front().couplings.size();
    for (const auto& p : members) {
        p.validate();
        if (p.couplings.size() != modes) {
            throw InvalidParameter("all TLS must carry the same number of couplings");
        }
        bool merged = false;
        if (merge_identical) {
            for (auto& g : out.groups_) {
                if (g.params == p) {
                    g.count += 1.0;
                    merged = true;
                    break;
                }
            }
        }
        if (!merged) out.groups_.push_back({p, 1.0});
    }
    return out;
}

TlsEnsemble TlsEnsemble::identical(double count, TlsParams params) {
    if (!(count > 0.0)) throw InvalidParameter("TLS count must be positive");
    params.validate();
    TlsEnsemble out;
    out.groups_.push_back({std::move(params), count});
    return out;
}

double TlsEnsemble::size() const noexcept {
    double n = 0.0;
    for (const auto& g : groups_) n += g.count;
    return n;
}

std::size_t TlsEnsemble::mode_count() const noexcept {
    return groups_.empty() ? 0 : groups_.front().params.couplings.size();
}

double bose_occupation(double omega, double temperature) {
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

double thermal_tanh(double omega, double temperature) {
    if (temperature == 0.0) return 1.0;
    return std::tanh(omega / (2.0 * temperature));
}

double transverse_rate(const TlsParams& p, const BathEnvironment& env) {
    const double nbar = bose_occupation(p.omega_B, env.temperature);
    return 0.5 * p.kappa1 * (1.0 + 2.0 * nbar) + 2.0 * p.kappa2;
}

double saturation(const TlsParams& p, const BathEnvironment& env) {
    const double kt = transverse_rate(p, env);
    const double detuning = p.omega_B - env.omega_d;
    return (kt / p.kappa1) * std::norm(p.Omega_B) / (kt * kt + detuning * detuning);
}

BlochSteadyState bloch_steady_state(const TlsParams& p, const BathEnvironment& env) {
    p.validate();
    env.validate();
    BlochSteadyState b;
    b.nbar = bose_occupation(p.omega_B, env.temperature);
    b.kappa_t = transverse_rate(p, env);
    b.Delta_B = p.omega_B - env.omega_d;
    b.saturation = saturation(p, env);
    const double inv = 1.0 / (1.0 + 2.0 * b.nbar + b.saturation);
    b.sigma_z = -inv;
    b.sigma_plus = -inv * std::conj(p.Omega_B) / (2.0 * Complex(b.Delta_B, b.kappa_t));
    return b;
}

ComplexMatrix bloch_matrix(const TlsParams& p, const BathEnvironment& env) {
    const double nbar = bose_occupation(p.omega_B, env.temperature);
    const double kt = transverse_rate(p, env);
    const double detuning = p.omega_B - env.omega_d;
    const Complex w = p.Omega_B;

    ComplexMatrix a(3, 3);
    a << Complex(-kt, detuning), 0.0, -kI * std::conj(w) / 2.0,
         0.0, Complex(-kt, -detuning), kI * w / 2.0,
         -kI * w, kI * std::conj(w), -p.kappa1 * (1.0 + 2.0 * nbar);
    return a;
}

ComplexVector same_time_correlators(const BlochSteadyState& b, Sign beta) {
    const Complex sp = b.sigma_plus;
    const Complex sm = std::conj(sp);
    const double sz = b.sigma_z;
    ComplexVector c(3);
    if (beta == Sign::Plus) {
        c << -sp * sp, (1.0 - sz) / 2.0 - sm * sp, sp * (1.0 - sz);
    } else {
        c << (1.0 + sz) / 2.0 - sp * sm, -sm * sm, -sm * (1.0 + sz);
    }
    return c;
}

ComplexVector correlator_integral(const TlsParams& p, const BathEnvironment& env, Sign beta,
                                  double Delta_m) {
    ComplexMatrix shifted = bloch_matrix(p, env);
    shifted.diagonal().array() += sign_value(beta) * kI * Delta_m;
    const ComplexVector initial = same_time_correlators(bloch_steady_state(p, env), beta);
    return -num::solve_linear(shifted, initial);
}

Complex psd(const TlsEnsemble& bath, const BathEnvironment& env, std::span<const double> detunings,
            Sign alpha, Sign beta, std::size_t m, std::size_t n) {
    const std::size_t modes = bath.mode_count();
    if (m >= modes || n >= modes || detunings.size() != modes) {
        throw InvalidParameter("psd: mode index out of range");
    }
    const std::size_t component = alpha == Sign::Plus ? 0 : 1;
    Complex total{0.0, 0.0};
    for (const auto& group : bath.groups()) {
        const ComplexVector integral = correlator_integral(group.params, env, beta, detunings[m]);
        total += group.count * coupling_with_sign(group.params, n, alpha) *
                 coupling_with_sign(group.params, m, beta) * integral[component];
    }
    return total;
}

PsdTable::PsdTable(const TlsEnsemble& bath, const BathEnvironment& env,
                   std::span<const double> detunings)
    : modes_(bath.mode_count()) {
    env.validate();
    if (modes_ == 0 || detunings.size() != modes_) {
        throw InvalidParameter("PsdTable: one detuning per system mode required");
    }
    for (auto& row : entries_) {
        for (auto& e : row) e = ComplexMatrix::Zero(modes_, modes_);
    }
    for (const auto& group : bath.groups()) {
        for (const Sign beta : {Sign::Plus, Sign::Minus}) {
            for (std::size_t m = 0; m < modes_; ++m) {
                const ComplexVector integral =
                    correlator_integral(group.params, env, beta, detunings[m]);
                const Complex gm = coupling_with_sign(group.params, m, beta);
                for (const Sign alpha : {Sign::Plus, Sign::Minus}) {
                    const Complex component = integral[slot(alpha)];
                    for (std::size_t n = 0; n < modes_; ++n) {
                        entries_[slot(alpha)][slot(beta)](m, n) +=
                            group.count * coupling_with_sign(group.params, n, alpha) * gm * component;
                    }
                }
            }
        }
    }
}

Complex PsdTable::operator()(Sign alpha, Sign beta, std::size_t m, std::size_t n) const {
    if (m >= modes_ || n >= modes_) throw InvalidParameter("PsdTable: mode index out of range");
    return entries_[slot(alpha)][slot(beta)](m, n);
}

}  // namespace tlsbath
