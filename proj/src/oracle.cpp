#include "tlsbath/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "tlsbath/errors.hpp"

namespace tlsbath::oracle {

namespace {

// Above this Liouvillian size the kernel is found by LU with a trace row
// instead of a full SVD.
constexpr Eigen::Index kSvdKernelLimit = 1024;
constexpr double kTraceTolerance = 1e-10;

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix single_sigma_minus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix single_sigma_z() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

ComplexMatrix commutator_superop(const ComplexMatrix& h) {
    const ComplexMatrix id = identity(h.rows());
    return -kI * (kron(id, h) - kron(ComplexMatrix(h.transpose()), id));
}

ComplexMatrix dissipator_superop(const ComplexMatrix& l) {
    const ComplexMatrix id = identity(l.rows());
    const ComplexMatrix ldl = l.adjoint() * l;
    return kron(ComplexMatrix(l.conjugate()), l) - 0.5 * kron(id, ldl) -
           0.5 * kron(ComplexMatrix(ldl.transpose()), id);
}

// a rho b - rho for Hermitian a = b with a^2 = 1
ComplexMatrix dephasing_superop(const ComplexMatrix& z) {
    const Eigen::Index n = z.rows();
    return kron(ComplexMatrix(z.transpose()), z) - identity(n * n);
}

ComplexVector vec(const ComplexMatrix& m) {
    return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index dim) {
    return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

Complex trace_product(const ComplexMatrix& rho, const ComplexMatrix& op) {
    // Tr(rho op) without forming the product
    return rho.cwiseProduct(op.transpose()).sum();
}

ComplexMatrix normalize_state(const ComplexMatrix& raw) {
    ComplexMatrix rho = 0.5 * (raw + raw.adjoint());
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw KernelDimension("steady state has zero trace");
    rho /= tr.real();
    return rho;
}

ComplexVector kernel_vector(const ComplexMatrix& l, Eigen::Index dim) {
    if (l.rows() <= kSvdKernelLimit) return num::null_vector(l);
    // Replace one equation by the trace condition.
    ComplexMatrix a = l;
    ComplexVector b = ComplexVector::Zero(l.rows());
    a.row(0).setZero();
    for (Eigen::Index k = 0; k < dim; ++k) a(0, k + dim * k) = 1.0;
    b[0] = 1.0;
    try {
        return num::solve_linear(a, b);
    } catch (const SingularMatrix&) {
        throw KernelDimension("steady state is not unique");
    }
}

Complex sigma_expectation(const ComplexMatrix& rho, Sign s) {
    // TLS basis index 0 = excited; <sigma_+> = rho(1, 0)
    return s == Sign::Plus ? rho(1, 0) : rho(0, 1);
}

ComplexMatrix sigma(Sign s) {
    const ComplexMatrix m = single_sigma_minus();
    return s == Sign::Plus ? ComplexMatrix(m.adjoint()) : m;
}

}  // namespace

void HilbertSpec::validate() const {
    if (fock_dim < 2) throw InvalidParameter("oracle: Fock dimension must be >= 2");
    if (n_tls < 1 || n_tls > 3) throw InvalidParameter("oracle: TLS count must be 1..3");
    if (dimension_cap > kHardDimensionCap) {
        throw InvalidParameter("oracle: dimension cap above " + std::to_string(kHardDimensionCap));
    }
    if (dimension() > dimension_cap) {
        throw DimensionCap("oracle: Hilbert dimension " + std::to_string(dimension()) +
                           " exceeds cap " + std::to_string(dimension_cap));
    }
}

Operators make_operators(const HilbertSpec& spec) {
    const auto fock = static_cast<Eigen::Index>(spec.fock_dim);
    const auto tls_dim = static_cast<Eigen::Index>(1) << spec.n_tls;

    ComplexMatrix a = ComplexMatrix::Zero(fock, fock);
    for (Eigen::Index k = 1; k < fock; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));

    Operators ops;
    ops.s = kron(a, identity(tls_dim));
    for (std::size_t j = 0; j < spec.n_tls; ++j) {
        const auto before = static_cast<Eigen::Index>(1) << j;
        const auto after = static_cast<Eigen::Index>(1) << (spec.n_tls - j - 1);
        const auto embed = [&](const ComplexMatrix& op) {
            return kron(identity(fock), kron(identity(before), kron(op, identity(after))));
        };
        ops.sigma_minus.push_back(embed(single_sigma_minus()));
        ops.sigma_z.push_back(embed(single_sigma_z()));
    }
    return ops;
}

Liouvillian build_liouvillian(const FullModel& model, const HilbertSpec& spec) {
    spec.validate();
    if (model.tls.size() != spec.n_tls) throw InvalidParameter("oracle: TLS list does not match spec");
    model.mode.validate();
    model.env.validate();
    for (const auto& p : model.tls) p.validate();

    const Operators ops = make_operators(spec);
    const ComplexMatrix& s = ops.s;
    const ComplexMatrix sd = s.adjoint();
    const double Delta_0 = model.mode.omega - model.env.omega_d;

    ComplexMatrix h = Delta_0 * sd * s + model.mode.Omega * s + std::conj(model.mode.Omega) * sd;
    for (std::size_t j = 0; j < spec.n_tls; ++j) {
        const TlsParams& p = model.tls[j];
        const ComplexMatrix& sm = ops.sigma_minus[j];
        const ComplexMatrix sp = sm.adjoint();
        const double Delta_B = p.omega_B - model.env.omega_d;
        const Complex G = p.couplings.front();
        h += 0.5 * (Delta_B * ops.sigma_z[j] + p.Omega_B * sp + std::conj(p.Omega_B) * sm);
        h += G * sp * s + std::conj(G) * sm * sd;
    }

    Liouvillian l;
    l.spec = spec;
    l.matrix = commutator_superop(h);

    const double n_mode = bose_occupation(model.mode.omega, model.env.temperature);
    if (model.mode.gamma > 0.0) {
        l.matrix += model.mode.gamma * (1.0 + n_mode) * dissipator_superop(s);
        if (n_mode > 0.0) l.matrix += model.mode.gamma * n_mode * dissipator_superop(sd);
    }
    for (std::size_t j = 0; j < spec.n_tls; ++j) {
        const TlsParams& p = model.tls[j];
        const double nb = bose_occupation(p.omega_B, model.env.temperature);
        const ComplexMatrix& sm = ops.sigma_minus[j];
        l.matrix += p.kappa1 * (1.0 + nb) * dissipator_superop(sm);
        if (nb > 0.0) l.matrix += p.kappa1 * nb * dissipator_superop(ComplexMatrix(sm.adjoint()));
        if (p.kappa2 > 0.0) l.matrix += p.kappa2 * dephasing_superop(ops.sigma_z[j]);
    }
    return l;
}

ComplexMatrix steady_state_full(const Liouvillian& l) {
    const auto dim = static_cast<Eigen::Index>(l.dimension());
    return normalize_state(unvec(kernel_vector(l.matrix, dim), dim));
}

ComplexMatrix evolve(const Liouvillian& l, const ComplexMatrix& rho0, double t) {
    const auto dim = static_cast<Eigen::Index>(l.dimension());
    if (rho0.rows() != dim || rho0.cols() != dim) throw InvalidParameter("evolve: state dimension mismatch");
    return unvec(num::expm_apply(l.matrix, vec(rho0), t), dim);
}

Expectations expectations(const ComplexMatrix& rho, const HilbertSpec& spec) {
    const auto dim = static_cast<Eigen::Index>(spec.dimension());
    if (rho.rows() != dim || rho.cols() != dim) throw InvalidParameter("expectations: dimension mismatch");
    if (std::abs(rho.trace() - 1.0) > kTraceTolerance) {
        throw InvalidParameter("expectations: state is not trace-normalized");
    }
    const Operators ops = make_operators(spec);
    const ComplexMatrix& s = ops.s;
    const ComplexMatrix sd = s.adjoint();

    Expectations e;
    e.s = trace_product(rho, s);
    e.n = trace_product(rho, sd * s).real();
    e.s2 = trace_product(rho, s * s);
    for (std::size_t j = 0; j < spec.n_tls; ++j) {
        e.sigma_plus.push_back(trace_product(rho, ops.sigma_minus[j].adjoint()));
        e.sigma_z.push_back(trace_product(rho, ops.sigma_z[j]).real());
    }

    const auto tls_dim = static_cast<Eigen::Index>(1) << spec.n_tls;
    const auto fock = static_cast<Eigen::Index>(spec.fock_dim);
    for (Eigen::Index level = std::max<Eigen::Index>(fock - 2, 0); level < fock; ++level) {
        for (Eigen::Index t = 0; t < tls_dim; ++t) e.leak += rho(level * tls_dim + t, level * tls_dim + t).real();
    }
    e.truncation_warning = e.leak >= kLeakTolerance;

    const double r = 1.0 / std::sqrt(2.0);
    const ComplexMatrix x = r * (s + sd);
    const ComplexMatrix p = kI * r * (sd - s);
    const double mx = trace_product(rho, x).real();
    const double mp = trace_product(rho, p).real();
    e.Vx = trace_product(rho, x * x).real() - mx * mx;
    e.Vp = trace_product(rho, p * p).real() - mp * mp;
    e.Cxp = 0.5 * trace_product(rho, x * p + p * x).real() - mx * mp;
    return e;
}

ComplexMatrix coherent_state(const HilbertSpec& spec, Complex alpha) {
    spec.validate();
    const auto fock = static_cast<Eigen::Index>(spec.fock_dim);
    ComplexVector amp(fock);
    amp[0] = 1.0;
    for (Eigen::Index k = 1; k < fock; ++k) amp[k] = amp[k - 1] * alpha / std::sqrt(static_cast<double>(k));
    amp.normalize();

    const auto tls_dim = static_cast<Eigen::Index>(1) << spec.n_tls;
    ComplexVector ground = ComplexVector::Zero(tls_dim);
    ground[tls_dim - 1] = 1.0;  // every TLS in index 1
    const ComplexVector psi = kron(amp, ground);
    return psi * psi.adjoint();
}

Solution solve(const FullModel& model, HilbertSpec spec) {
    spec.n_tls = model.tls.size();
    spec.validate();
    Solution out;
    while (true) {
        out.spec = spec;
        out.liouvillian = build_liouvillian(model, spec);
        out.rho = steady_state_full(out.liouvillian);
        out.moments = expectations(out.rho, spec);
        if (!out.moments.truncation_warning) return out;
        HilbertSpec next = spec;
        next.fock_dim *= 2;
        if (next.dimension() > next.dimension_cap) return out;
        spec = next;
    }
}

std::vector<Complex> coherence_g1(const Solution& solution, std::span<const double> tau_grid) {
    const auto dim = static_cast<Eigen::Index>(solution.spec.dimension());
    const Operators ops = make_operators(solution.spec);
    const ComplexMatrix& s = ops.s;
    const double n = solution.moments.n;
    if (!(n > 0.0)) throw InvalidParameter("oracle coherence_g1: steady-state occupation is zero");

    ComplexVector x = vec(ComplexMatrix(solution.rho * s.adjoint()));
    const ComplexMatrix& l = solution.liouvillian.matrix;

    std::vector<Complex> out;
    out.reserve(tau_grid.size());
    double t_prev = 0.0;
    double step_prev = -1.0;
    ComplexMatrix propagator;
    for (const double tau : tau_grid) {
        if (tau < t_prev) throw InvalidParameter("oracle coherence_g1: tau grid must be nondecreasing");
        const double step = tau - t_prev;
        if (step > 0.0) {
            if (std::abs(step - step_prev) > 1e-12 * step) {
                propagator = num::expm(l, step);
                step_prev = step;
            }
            x = propagator * x;
        }
        t_prev = tau;
        out.push_back(trace_product(unvec(x, dim), s) / n);
    }
    if (!out.empty() && tau_grid.front() == 0.0) out.front() = 1.0;
    return out;
}

ComplexMatrix tls_liouvillian(const TlsParams& p, const BathEnvironment& env) {
    p.validate();
    env.validate();
    const ComplexMatrix sm = single_sigma_minus();
    const ComplexMatrix sp = sm.adjoint();
    const ComplexMatrix sz = single_sigma_z();
    const double Delta_B = p.omega_B - env.omega_d;
    const double nb = bose_occupation(p.omega_B, env.temperature);

    const ComplexMatrix h = 0.5 * (Delta_B * sz + p.Omega_B * sp + std::conj(p.Omega_B) * sm);
    ComplexMatrix l = commutator_superop(h) + p.kappa1 * (1.0 + nb) * dissipator_superop(sm);
    if (nb > 0.0) l += p.kappa1 * nb * dissipator_superop(sp);
    if (p.kappa2 > 0.0) l += p.kappa2 * dephasing_superop(sz);
    return l;
}

Complex regression_integral(const TlsParams& p, const BathEnvironment& env, Sign late, Sign early,
                            CorrelatorOrder order, double rate) {
    const ComplexMatrix l = tls_liouvillian(p, env);
    const ComplexMatrix rho = normalize_state(unvec(num::null_vector(l), 2));

    const ComplexMatrix a = sigma(late) - sigma_expectation(rho, late) * identity(2);
    const ComplexMatrix b = sigma(early) - sigma_expectation(rho, early) * identity(2);
    const ComplexVector x0 = vec(order == CorrelatorOrder::LateFirst ? ComplexMatrix(b * rho)
                                                                     : ComplexMatrix(rho * b));
    // f(tau) = Tr(a e^{L tau} x0) = w^T e^{L tau} x0 with w = vec(a^T)
    const ComplexVector w = vec(ComplexMatrix(a.transpose()));

    const num::EigenDecomposition eig = num::eigen_decompose(l);
    const double scale = num::inf_norm(l);
    double slowest = std::numeric_limits<double>::infinity();
    Complex slowest_value{0.0, 0.0};
    double fastest_oscillation = std::abs(rate);
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const Complex lam = eig.values[k];
        if (std::abs(lam) <= 1e-10 * scale) continue;
        fastest_oscillation = std::max(fastest_oscillation, std::abs(lam.imag() + rate));
        if (-lam.real() < slowest) {
            slowest = -lam.real();
            slowest_value = lam;
        }
    }
    if (!(slowest > 0.0) || !std::isfinite(slowest)) {
        throw NoConvergence("regression_integral: correlator does not decay");
    }

    const Eigen::PartialPivLU<ComplexMatrix> lu(eig.vectors);
    const ComplexVector coeff = lu.solve(x0);
    const ComplexVector weights = (w.transpose() * eig.vectors).transpose();
    const bool spectral_ok = num::inf_norm(ComplexVector(eig.vectors * coeff - x0)) <=
                             1e-12 * std::max(num::inf_norm(x0), 1e-300);

    const auto integrand = [&](double tau) -> Complex {
        Complex f{0.0, 0.0};
        if (spectral_ok) {
            for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
                f += weights[k] * coeff[k] * std::exp(eig.values[k] * tau);
            }
        } else {
            f = (w.transpose() * num::expm_apply(l, x0, tau))(0);
        }
        return f * std::exp(kI * (rate * tau));
    };

    const double tau_max = 40.0 / slowest;
    // Panels short enough to hold a few oscillations each.
    const double panel = std::min(2.0 / slowest, 4.0 * std::numbers::pi / fastest_oscillation);
    const auto panels = static_cast<std::size_t>(std::ceil(tau_max / panel));
    Complex total{0.0, 0.0};
    for (std::size_t k = 0; k < panels; ++k) {
        const double lo = tau_max * static_cast<double>(k) / static_cast<double>(panels);
        const double hi = tau_max * static_cast<double>(k + 1) / static_cast<double>(panels);
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 10, 1e-14);
    }
    total += -integrand(tau_max) / (slowest_value + kI * rate);
    return total;
}

Complex bloch_correlator_numeric(const TlsParams& p, const BathEnvironment& env, Sign alpha,
                                 Sign beta, double Delta_m) {
    return regression_integral(p, env, alpha, beta, CorrelatorOrder::LateFirst, sign_value(beta) * Delta_m);
}

}  // namespace tlsbath::oracle
