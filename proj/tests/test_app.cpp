#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "test_helpers.hpp"
#include "tlsbath/app/config.hpp"
#include "tlsbath/app/scenarios.hpp"
#include "tlsbath/app/validation.hpp"
#include "tlsbath/errors.hpp"

using namespace tlsbath;
using namespace tlsbath::app;

namespace {

std::string field_of(const std::vector<std::string>& overrides) {
    try {
        load_config(std::nullopt, overrides);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

std::string csv(const SweepResult& r) {
    std::ostringstream out;
    write_csv(out, r, "2000-01-01T00:00:00Z");
    return out.str();
}

ScenarioConfig short_sweep(const std::string& variable, double lo, double hi, std::size_t count,
                           const std::string& spacing = "log") {
    return load_config(std::nullopt, {"sweep.variable=" + variable, "sweep.min=" + std::to_string(lo),
                                      "sweep.max=" + std::to_string(hi), "sweep.count=" + std::to_string(count),
                                      "sweep.spacing=" + spacing});
}

}  // namespace

TEST_CASE("defaults are the reference parameter set") {
    const ScenarioConfig c = load_config(std::nullopt);
    CHECK(c.N == 1e5);
    CHECK(c.G == Complex(1e-8));
    CHECK(c.kappa1 == 1e-4);
    CHECK(c.kappa2 == 0.0);
    CHECK(c.gamma_0 == 1e-7);
    CHECK(c.temperature == 0.0);
    CHECK(c.kappa_t() == doctest::Approx(5e-5));
}

TEST_CASE("overrides, units and INI files") {
    const ScenarioConfig c = load_config(std::nullopt, {"tls.Omega_B=2 kappa_t", "mode.Omega_0=(1e-9,2e-9)"});
    CHECK(c.Omega_B.real() == doctest::Approx(1e-4));
    CHECK(c.Omega_0 == Complex(1e-9, 2e-9));

    const auto path = std::filesystem::temp_directory_path() / "tlsbath_test_config.ini";
    {
        std::ofstream f(path);
        f << "[tls]\nkappa2 = 1e-5\n[mode]\ngamma_0 = 3e-8\n";
    }
    const ScenarioConfig d = load_config(path.string(), {"mode.gamma_0=4e-8"});
    CHECK(d.kappa2 == 1e-5);
    CHECK(d.gamma_0 == 4e-8);
    std::filesystem::remove(path);
}

TEST_CASE("config errors name the offending field") {
    CHECK(field_of({"tls.foo=1"}) == "tls.foo");
    CHECK(field_of({"bogus.N=1"}) == "bogus");
    CHECK(field_of({"tls.kappa1=-1"}) == "tls.kappa1");
    CHECK(field_of({"tls.N=abc"}) == "tls.N");
    CHECK(field_of({"sweep.count=1"}) == "sweep.count");
    CHECK(field_of({"sweep.min=5", "sweep.max=1"}) == "sweep.min");
    CHECK(field_of({"sweep.variable=nonsense"}) == "sweep.variable");
    CHECK(field_of({"output.format=xml"}) == "output.format");
}

TEST_CASE("CSV output is deterministic and independent of the worker count") {
    const ScenarioConfig c = short_sweep("Omega_B", 0.1, 10.0, 23);
    for (const std::string name : {"gamma-rate", "steady-state", "squeezing"}) {
        const std::string one = csv(run_scenario(name, c, 1));
        CHECK(one == csv(run_scenario(name, c, 1)));
        CHECK(one == csv(run_scenario(name, c, 4)));
    }
}

TEST_CASE("CSV dialect: comment header, column row, sentinel for unstable points") {
    ScenarioConfig c = short_sweep("Omega_B", 0.5, 2.0, 5);
    c.gamma_0 = 3e-9;
    const SweepResult r = run_scenario("squeezing", c, 1);
    const std::string text = csv(r);
    CHECK(text.rfind("# tlsbath ", 0) == 0);
    CHECK(text.find("# timestamp = 2000-01-01T00:00:00Z") != std::string::npos);
    CHECK(text.find("# tls.N = 100000") != std::string::npos);
    CHECK(text.find("unstable") != std::string::npos);
    for (const auto& row : r.rows) CHECK(row.size() == r.columns.size());
}

TEST_CASE("undriven decay rate equals the low-drive limit") {
    const ScenarioConfig c = short_sweep("Delta_0", -5.0, 5.0, 11, "linear");
    const SweepResult r = run_scenario("decay-rate", c, 1);
    const auto col = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(r.columns.begin(), r.columns.end(), name) - r.columns.begin());
    };
    for (const auto& row : r.rows) CHECK(rel(*row[col("gamma")], *row[col("gamma_low_drive")]) < 1e-9);
}

TEST_CASE("effective drive peaks on resonance in a detuning sweep") {
    ScenarioConfig c = load_config(std::nullopt, {"tls.Omega_B=0.01 kappa_t", "sweep.variable=Delta_B",
                                                  "sweep.min=-5", "sweep.max=5", "sweep.count=41",
                                                  "sweep.spacing=linear"});
    const SweepResult r = run_scenario("driving", c, 2);
    std::size_t best = 0;
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        if (*r.rows[k][4] > *r.rows[best][4]) best = k;
    }
    CHECK(*r.rows[best][1] == doctest::Approx(0.0));
}

TEST_CASE("a perturbed closed form fails the closed-form criterion") {
    CHECK(run_criterion(4).status == Status::Pass);
    ValidationOptions opts;
    opts.closed_form = [](double N, double G, double k1, double s, double d) {
        SqueezingRates r = resonant_closed_form(N, G, k1, s, d);
        r.g *= 1.0 + 1e-6;
        return r;
    };
    CHECK(run_criterion(4, opts).status == Status::Fail);
}

TEST_CASE("oracle criterion is skipped when the dimension cap is too small") {
    ValidationOptions opts;
    opts.oracle_dimension_cap = 8;
    const CriterionResult r = run_criterion(10, opts);
    CHECK(r.status == Status::Skipped);
    CHECK_FALSE(r.detail.empty());
}

TEST_CASE("unknown scenario is a config error") {
    CHECK_THROWS_AS(run_scenario("nope", ScenarioConfig{}), ConfigError);
}
