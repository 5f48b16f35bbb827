#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tlsbath/app/config.hpp"
#include "tlsbath/app/scenarios.hpp"
#include "tlsbath/app/validation.hpp"
#include "tlsbath/errors.hpp"
#include "tlsbath/mode_dynamics.hpp"

namespace py = pybind11;
using namespace tlsbath;

namespace {

app::ScenarioConfig config_from(const std::vector<std::string>& overrides) {
    return app::load_config(std::nullopt, overrides);
}

py::dict scenario_dict(const app::SweepResult& r) {
    py::dict d;
    d["scenario"] = r.scenario;
    d["columns"] = r.columns;
    d["rows"] = r.rows;  // None marks an unstable point
    py::dict cfg;
    for (const auto& [k, v] : r.config) cfg[py::str(k)] = v;
    d["config"] = cfg;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bindings for the tlsbath C++ core";

    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<Error> numerical_error(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            PyErr_SetString(config_error.ptr(), e.what());
        } catch (const InvalidParameter& e) {
            PyErr_SetString(config_error.ptr(), e.what());
        } catch (const Error& e) {
            PyErr_SetString(numerical_error.ptr(), e.what());
        }
    });

    py::class_<SingleModeRates>(m, "SingleModeRates")
        .def_readonly("Omega0_prime", &SingleModeRates::Omega0_prime)
        .def_readonly("delta", &SingleModeRates::delta)
        .def_readonly("g", &SingleModeRates::g)
        .def_readonly("gamma_plus", &SingleModeRates::gamma_plus)
        .def_readonly("gamma_minus", &SingleModeRates::gamma_minus)
        .def_readonly("gamma", &SingleModeRates::gamma)
        .def_readonly("Gamma", &SingleModeRates::Gamma);

    py::class_<SteadyStateReport>(m, "SteadyState")
        .def_property_readonly("stable", &SteadyStateReport::stable)
        .def_property_readonly("max_re", [](const SteadyStateReport& r) { return r.verdict.max_re; })
        .def_readonly("v_ss", &SteadyStateReport::v_ss)
        .def_readonly("xi", &SteadyStateReport::xi)
        .def_property_readonly("Vx", [](const SteadyStateReport& r) { return r.covariance.Vx; })
        .def_property_readonly("Vp", [](const SteadyStateReport& r) { return r.covariance.Vp; })
        .def_property_readonly("Cxp", [](const SteadyStateReport& r) { return r.covariance.Cxp; })
        .def_readonly("residual", &SteadyStateReport::residual);

    m.def("scenario_names", &app::scenario_names);
    m.def("load_config", [](const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
        return app::load_config(path, overrides).resolved();
    }, py::arg("path") = std::nullopt, py::arg("overrides") = std::vector<std::string>{});

    m.def("rates", [](const std::vector<std::string>& overrides) { return config_from(overrides).setup().rates(); },
          py::arg("overrides") = std::vector<std::string>{},
          "Single-mode rates for the reference parameters with `section.key=value` overrides.");

    m.def("steady_state", [](const std::vector<std::string>& overrides) {
        const app::ScenarioConfig c = config_from(overrides);
        const SingleModeSetup s = c.setup();
        return steady_state(build_moment_system(s.rates(), c.gamma_0, c.Delta_0,
                                                bose_occupation(s.omega_0, s.temperature)));
    }, py::arg("overrides") = std::vector<std::string>{});

    m.def("stability", [](const std::vector<std::string>& overrides) {
        const app::ScenarioConfig c = config_from(overrides);
        const SingleModeSetup s = c.setup();
        const StabilityVerdict v = stability(build_moment_system(s.rates(), c.gamma_0, c.Delta_0));
        return py::make_tuple(v.stable, v.max_re, v.criterion_holds);
    }, py::arg("overrides") = std::vector<std::string>{}, "(stable, max Re lambda, 4|g| < gamma_total)");

    m.def("closed_form", [](double N, double G, double kappa1, double s, double Delta_0) {
        const SqueezingRates r = resonant_closed_form(N, G, kappa1, s, Delta_0);
        return py::make_tuple(r.g, r.Gamma);
    }, py::arg("N"), py::arg("G"), py::arg("kappa1"), py::arg("s"), py::arg("Delta_0"));

    m.def("run_scenario", [](const std::string& name, const std::vector<std::string>& overrides, unsigned jobs) {
        app::ScenarioConfig c = config_from(overrides);
        if (name == "stability-map") c.has_sweep2 = true;
        app::SweepResult r;
        {
            py::gil_scoped_release release;
            r = app::run_scenario(name, c, jobs);
        }
        return scenario_dict(r);
    }, py::arg("name"), py::arg("overrides") = std::vector<std::string>{}, py::arg("jobs") = 1u);

    m.def("oracle_comparison", [](double ratio, const std::vector<std::string>& overrides) {
        const app::OracleComparison o = app::oracle_comparison(config_from(overrides), ratio);
        py::dict d;
        d["fock_dim"] = o.fock_dim;
        d["leak"] = o.leak;
        d["n_effective"] = o.n_effective;
        d["n_exact"] = o.n_exact;
        d["error_n"] = o.error_n;
        d["error_s"] = o.error_s;
        d["error_s2"] = o.error_s2;
        return d;
    }, py::arg("ratio"), py::arg("overrides") = std::vector<std::string>{});

    m.def("validate_all", [](std::size_t oracle_dimension_cap) {
        app::ValidationOptions opts;
        opts.oracle_dimension_cap = oracle_dimension_cap;
        std::vector<app::CriterionResult> results;
        {
            py::gil_scoped_release release;
            results = app::validate_all(opts);
        }
        py::list out;
        for (const auto& r : results) {
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["status"] = app::to_string(r.status);
            d["measured"] = r.measured;
            d["tolerance"] = r.tolerance;
            d["detail"] = r.detail;
            out.append(d);
        }
        return out;
    }, py::arg("oracle_dimension_cap") = 64);
}
