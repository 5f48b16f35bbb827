#include "tlsbath/app/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "tlsbath/errors.hpp"
#include "tlsbath/mode_dynamics.hpp"
#include "tlsbath/oracle.hpp"

#ifndef TLSBATH_VERSION
#define TLSBATH_VERSION "0.0.0"
#endif

namespace tlsbath::app {

namespace {

using Row = std::vector<Cell>;

std::vector<Row> parallel_rows(std::size_t n, unsigned jobs, const std::function<Row(std::size_t)>& fn) {
    std::vector<Row> rows(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                rows[i] = fn(i);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < count; ++k) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    return rows;
}

Cell flag(bool b) { return b ? 1.0 : 0.0; }

double rel_error(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Leading columns for a 1-D sweep: the absolute value and, when a unit is
// used, the value in that unit.
std::vector<std::string> axis_columns(const AxisSpec& axis) {
    std::vector<std::string> cols{axis.variable};
    if (axis.unit != "omega_B") cols.push_back(axis.variable + "_per_" + axis.unit);
    return cols;
}

Row axis_cells(const AxisSpec& axis, double absolute, double scaled) {
    Row r{absolute};
    if (axis.unit != "omega_B") r.push_back(scaled);
    return r;
}

ScenarioConfig at_point(const ScenarioConfig& base, const AxisSpec& axis, double scaled, double* absolute) {
    ScenarioConfig c = base;
    const double value = base.to_absolute(axis, scaled);
    c.apply(axis.variable, value);
    if (absolute) *absolute = value;
    return c;
}

double mode_thermal_occupation(const SingleModeSetup& s) { return bose_occupation(s.omega_0, s.temperature); }

MomentSystem moment_system(const ScenarioConfig& c, const SingleModeRates& r) {
    const SingleModeSetup s = c.setup();
    return build_moment_system(r, c.gamma_0, c.Delta_0, mode_thermal_occupation(s));
}

SweepResult make_result(const std::string& name, const ScenarioConfig& config) {
    SweepResult out;
    out.scenario = name;
    out.config = config.resolved();
    return out;
}

SweepResult rate_sweep(const std::string& name, const ScenarioConfig& config, unsigned jobs,
                       std::vector<std::string> value_columns,
                       const std::function<Row(const ScenarioConfig&, const SingleModeRates&)>& values) {
    SweepResult out = make_result(name, config);
    out.columns = axis_columns(config.sweep);
    out.columns.insert(out.columns.end(), value_columns.begin(), value_columns.end());
    const std::vector<double> grid = config.sweep.grid();
    out.rows = parallel_rows(grid.size(), jobs, [&](std::size_t i) {
        double absolute = 0.0;
        const ScenarioConfig c = at_point(config, config.sweep, grid[i], &absolute);
        Row row = axis_cells(config.sweep, absolute, grid[i]);
        const Row v = values(c, c.setup().rates());
        row.insert(row.end(), v.begin(), v.end());
        return row;
    });
    return out;
}

Row steady_state_cells(const ScenarioConfig& c, const SingleModeRates& r) {
    const MomentSystem ms = moment_system(c, r);
    const SteadyStateReport rep = steady_state(ms);
    Row row{flag(rep.stable()), rep.verdict.max_re};
    if (rep.v_ss) {
        const ComplexVector& v = *rep.v_ss;
        row.insert(row.end(), {v[0].real(), v[1].real(), v[1].imag(), v[3].real(), v[3].imag(),
                               std::norm(v[1]), std::abs(v[3]), rep.xi, rep.covariance.Vx,
                               rep.covariance.Vp, rep.covariance.Cxp});
    } else {
        row.insert(row.end(), 11, std::nullopt);
    }
    if (c.gamma_0 + r.gamma > 0.0) {
        const ApproxSteadyState a = approx_steady_state(r, c.gamma_0);
        row.insert(row.end(), {a.n, a.s_dag.real(), a.s_dag.imag()});
    } else {
        row.insert(row.end(), 3, std::nullopt);
    }
    return row;
}

const std::vector<std::string> kSteadyStateColumns{
    "stable", "max_re_lambda", "n", "s_re", "s_im", "s2_re", "s2_im", "abs_s_sq", "abs_s2",
    "xi", "Vx", "Vp", "Cxp", "n_approx", "s_dag_approx_re", "s_dag_approx_im"};

SweepResult coherence(const ScenarioConfig& config) {
    SweepResult out = make_result("coherence", config);
    out.columns = {"tau", "g1_re", "g1_im", "g1_abs"};
    const SingleModeRates r = config.setup().rates();
    const MomentSystem ms = moment_system(config, r);
    const SteadyStateReport rep = steady_state(ms);

    std::vector<double> grid;
    if (config.sweep.variable == "tau") {
        for (const double t : config.sweep.grid()) grid.push_back(config.to_absolute(config.sweep, t));
    } else if (ms.gamma_total > 0.0) {
        grid = default_tau_grid(ms.gamma_total);
    } else {
        throw UnstableSystem("coherence: gamma_0 + gamma <= 0, no default time grid");
    }

    if (!rep.v_ss) {
        for (const double t : grid) out.rows.push_back({t, std::nullopt, std::nullopt, std::nullopt});
        return out;
    }
    const CoherenceSeries g1 = coherence_g1(ms, rep, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out.rows.push_back({grid[k], g1.g1[k].real(), g1.g1[k].imag(), std::abs(g1.g1[k])});
    }
    return out;
}

SweepResult stability_map(const ScenarioConfig& config, unsigned jobs) {
    SweepResult out = make_result("stability-map", config);
    const AxisSpec& ax = config.sweep;
    const AxisSpec& ay = config.sweep2;
    out.columns = {ax.variable, ay.variable, ax.variable + "_per_" + ax.unit, ay.variable + "_per_" + ay.unit,
                   "max_re_lambda", "stable", "criterion", "agree"};
    const std::vector<double> gx = ax.grid();
    const std::vector<double> gy = ay.grid();
    out.rows = parallel_rows(gx.size() * gy.size(), jobs, [&](std::size_t idx) {
        const std::size_t i = idx / gy.size();
        const std::size_t j = idx % gy.size();
        double x = 0.0;
        double y = 0.0;
        const ScenarioConfig cx = at_point(config, ax, gx[i], &x);
        const ScenarioConfig c = at_point(cx, ay, gy[j], &y);
        const StabilityVerdict v = stability(moment_system(c, c.setup().rates()));
        return Row{x, y, gx[i], gy[j], v.max_re, flag(v.stable), flag(v.criterion_holds),
                   flag(v.stable == v.criterion_holds)};
    });
    return out;
}

SweepResult squeezing(const ScenarioConfig& config, unsigned jobs) {
    SweepResult out = make_result("squeezing", config);
    const AxisSpec& ax = config.sweep;
    out.columns = axis_columns(ax);
    if (config.has_sweep2) out.columns.insert(out.columns.begin(), config.sweep2.variable);
    out.columns.insert(out.columns.end(), {"s", "stable", "xi", "stable_g0", "xi_g0"});
    const std::vector<double> gx = ax.grid();
    const std::vector<double> gy = config.has_sweep2 ? config.sweep2.grid() : std::vector<double>{0.0};
    out.rows = parallel_rows(gx.size() * gy.size(), jobs, [&](std::size_t idx) {
        const std::size_t j = idx / gx.size();
        const std::size_t i = idx % gx.size();
        ScenarioConfig c = config;
        double y = 0.0;
        if (config.has_sweep2) c = at_point(config, config.sweep2, gy[j], &y);
        double x = 0.0;
        c = at_point(c, ax, gx[i], &x);
        Row row;
        if (config.has_sweep2) row.push_back(y);
        const Row lead = axis_cells(ax, x, gx[i]);
        row.insert(row.end(), lead.begin(), lead.end());
        row.push_back(saturation(c.setup().tls(), c.setup().environment()));

        SingleModeRates r = c.setup().rates();
        const SteadyStateReport full = steady_state(moment_system(c, r));
        r.g = 0.0;
        const SteadyStateReport no_g = steady_state(moment_system(c, r));
        row.push_back(flag(full.stable()));
        row.push_back(full.stable() ? Cell(full.xi) : std::nullopt);
        row.push_back(flag(no_g.stable()));
        row.push_back(no_g.stable() ? Cell(no_g.xi) : std::nullopt);
        return row;
    });
    return out;
}

SweepResult oracle_validate(const ScenarioConfig& config, unsigned jobs) {
    SweepResult out = make_result("oracle-validate", config);
    out.columns = {"ratio", "G", "gamma_0", "fock_dim", "leak", "truncation_warning",
                   "n_effective", "n_exact", "rel_error_n",
                   "s_effective_re", "s_effective_im", "s_exact_re", "s_exact_im", "rel_error_s",
                   "s2_effective_re", "s2_effective_im", "s2_exact_re", "s2_exact_im", "rel_error_s2"};
    out.rows = parallel_rows(config.oracle.ratios.size(), jobs, [&](std::size_t k) {
        const OracleComparison o = oracle_comparison(config, config.oracle.ratios[k]);
        return Row{o.ratio, o.G, o.gamma_0, static_cast<double>(o.fock_dim), o.leak,
                   flag(o.truncation_warning), o.n_effective, o.n_exact, o.error_n,
                   o.s_effective.real(), o.s_effective.imag(), o.s_exact.real(), o.s_exact.imag(), o.error_s,
                   o.s2_effective.real(), o.s2_effective.imag(), o.s2_exact.real(), o.s2_exact.imag(),
                   o.error_s2};
    });
    return out;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"driving",      "gamma-rate", "squeeze-rate",  "decay-rate",
                                                "freq-shift",   "steady-state", "coherence", "stability-map",
                                                "squeezing",    "oracle-validate"};
    return names;
}

SweepResult run_scenario(const std::string& name, const ScenarioConfig& config, unsigned jobs) {
    const auto saturation_of = [](const ScenarioConfig& c) {
        return saturation(c.setup().tls(), c.setup().environment());
    };
    if (name == "driving") {
        return rate_sweep(name, config, jobs, {"Omega0_prime_re", "Omega0_prime_im", "Omega0_prime_abs", "s"},
                          [&](const ScenarioConfig& c, const SingleModeRates& r) {
                              return Row{r.Omega0_prime.real(), r.Omega0_prime.imag(),
                                         std::abs(r.Omega0_prime), saturation_of(c)};
                          });
    }
    if (name == "gamma-rate") {
        return rate_sweep(name, config, jobs, {"Gamma_re", "Gamma_im", "Gamma_abs", "s"},
                          [&](const ScenarioConfig& c, const SingleModeRates& r) {
                              return Row{r.Gamma.real(), r.Gamma.imag(), std::abs(r.Gamma), saturation_of(c)};
                          });
    }
    if (name == "squeeze-rate") {
        return rate_sweep(name, config, jobs, {"g_re", "g_im", "g_abs", "s"},
                          [&](const ScenarioConfig& c, const SingleModeRates& r) {
                              return Row{r.g.real(), r.g.imag(), std::abs(r.g), saturation_of(c)};
                          });
    }
    if (name == "decay-rate") {
        return rate_sweep(name, config, jobs, {"gamma", "gamma_plus", "gamma_minus", "gamma_low_drive", "s"},
                          [&](const ScenarioConfig& c, const SingleModeRates& r) {
                              return Row{r.gamma, r.gamma_plus, r.gamma_minus,
                                         low_drive_limits(c.setup()).gamma, saturation_of(c)};
                          });
    }
    if (name == "freq-shift") {
        return rate_sweep(name, config, jobs, {"delta", "delta_low_drive", "s"},
                          [&](const ScenarioConfig& c, const SingleModeRates& r) {
                              return Row{r.delta, low_drive_limits(c.setup()).delta, saturation_of(c)};
                          });
    }
    if (name == "steady-state") return rate_sweep(name, config, jobs, kSteadyStateColumns, steady_state_cells);
    if (name == "coherence") return coherence(config);
    if (name == "stability-map") return stability_map(config, jobs);
    if (name == "squeezing") return squeezing(config, jobs);
    if (name == "oracle-validate") return oracle_validate(config, jobs);
    throw ConfigError("scenario", "unknown scenario '" + name + "'");
}

SweepResult rates_table(const ScenarioConfig& config) {
    SweepResult out = make_result("rates", config);
    const SingleModeSetup s = config.setup();
    const SingleModeRates r = s.rates();
    const BlochSteadyState b = bloch_steady_state(s.tls(), s.environment());
    out.columns = {"s", "kappa_t", "sigma_plus_re", "sigma_plus_im", "sigma_z",
                   "Omega0_prime_re", "Omega0_prime_im", "delta", "g_re", "g_im",
                   "gamma_plus", "gamma_minus", "gamma", "Gamma_re", "Gamma_im"};
    out.rows.push_back({b.saturation, b.kappa_t, b.sigma_plus.real(), b.sigma_plus.imag(), b.sigma_z,
                        r.Omega0_prime.real(), r.Omega0_prime.imag(), r.delta, r.g.real(), r.g.imag(),
                        r.gamma_plus, r.gamma_minus, r.gamma, r.Gamma.real(), r.Gamma.imag()});
    return out;
}

SweepResult steady_state_point(const ScenarioConfig& config) {
    SweepResult out = make_result("steady-state", config);
    out.columns = kSteadyStateColumns;
    out.rows.push_back(steady_state_cells(config, config.setup().rates()));
    return out;
}

OracleComparison oracle_comparison(const ScenarioConfig& config, double ratio) {
    OracleComparison o;
    o.ratio = ratio;

    ScenarioConfig c = config;
    c.N = 1.0;
    c.Delta_B = 0.0;
    c.Delta_0 = 0.0;
    c.Omega_0 = 0.0;
    const double kt = c.kappa_t();
    c.Omega_B = std::sqrt(c.kappa1 * kt);  // s = 1 on resonance
    c.G = ratio * kt;
    o.G = c.G.real();

    const SingleModeRates r0 = c.setup().rates();
    c.gamma_0 = 2.0 * std::abs(r0.Omega0_prime) / std::sqrt(c.oracle.target_occupation);
    o.gamma_0 = c.gamma_0;

    const SingleModeSetup s = c.setup();
    const SingleModeRates r = s.rates();
    const SteadyStateReport rep = steady_state(build_moment_system(r, c.gamma_0, c.Delta_0,
                                                                   mode_thermal_occupation(s)));
    if (!rep.v_ss) throw UnstableSystem("oracle comparison: effective model is unstable");
    const ComplexVector& v = *rep.v_ss;
    o.n_effective = v[0].real();
    o.s_effective = v[1];
    o.s2_effective = v[3];

    oracle::FullModel model{s.mode(), {s.tls()}, s.environment()};
    oracle::HilbertSpec spec;
    spec.fock_dim = c.oracle.fock_dim;
    spec.n_tls = 1;
    spec.dimension_cap = c.oracle.dimension_cap;
    const oracle::Solution sol = oracle::solve(model, spec);
    o.fock_dim = sol.spec.fock_dim;
    o.leak = sol.moments.leak;
    o.truncation_warning = sol.moments.truncation_warning;
    o.n_exact = sol.moments.n;
    o.s_exact = sol.moments.s;
    o.s2_exact = sol.moments.s2;

    o.error_n = rel_error(o.n_effective, o.n_exact);
    o.error_s = rel_error(o.s_effective, o.s_exact);
    o.error_s2 = rel_error(o.s2_effective, o.s2_exact);
    return o;
}

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_csv(std::ostream& out, const SweepResult& result, const std::string& timestamp) {
    out << "# tlsbath " << TLSBATH_VERSION << "\n";
    out << "# scenario = " << result.scenario << "\n";
    out << "# timestamp = " << timestamp << "\n";
    for (const auto& [key, value] : result.config) out << "# " << key << " = " << value << "\n";
    for (std::size_t k = 0; k < result.columns.size(); ++k) out << (k ? "," : "") << result.columns[k];
    out << "\n";
    for (const auto& row : result.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            out << (k ? "," : "") << (row[k] ? format_number(*row[k]) : std::string("unstable"));
        }
        out << "\n";
    }
}

void write_json(std::ostream& out, const SweepResult& result, const std::string& timestamp) {
    nlohmann::ordered_json j;
    j["tool"] = "tlsbath";
    j["version"] = TLSBATH_VERSION;
    j["scenario"] = result.scenario;
    j["timestamp"] = timestamp;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : result.config) cfg[key] = value;
    j["config"] = cfg;
    j["columns"] = result.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : result.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& cell : row) {
            if (cell) {
                r.push_back(*cell);
            } else {
                r.push_back("unstable");
            }
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    out << j.dump(2) << "\n";
}

}  // namespace tlsbath::app
