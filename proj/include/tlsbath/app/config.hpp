#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlsbath/numerics.hpp"
#include "tlsbath/rates.hpp"

namespace tlsbath::app {

/// One sweep axis. Values are in units of `unit`: omega_B (absolute),
/// kappa_t, kappa1, or gamma_total (tau axes only, measured in 1/gamma_total).
struct AxisSpec {
    std::string variable = "Omega_B";
    double min = 1e-2;
    double max = 1e2;
    std::size_t count = 101;
    bool log = true;
    std::string unit = "kappa_t";

    std::vector<double> grid() const;  // in `unit`
};

struct OracleConfig {
    std::vector<double> ratios{0.1, 0.03, 0.01};  // G / kappa_t
    std::size_t fock_dim = 10;
    std::size_t dimension_cap = 64;
    double target_occupation = 0.2;
};

/// Single-mode, identical-TLS scenario. Defaults are the reference parameter
/// set: T = 0, G = 1e-8, N = 1e5, kappa1 = 1e-4, kappa2 = 0, gamma_0 = 1e-7.
struct ScenarioConfig {
    // mode
    double Delta_0 = 0.0;  // omega_0 - omega_d
    double gamma_0 = 1e-7;
    Complex Omega_0{0.0, 0.0};
    // tls
    double N = 1e5;
    Complex G{1e-8, 0.0};
    double kappa1 = 1e-4;
    double kappa2 = 0.0;
    Complex Omega_B{0.0, 0.0};
    double Delta_B = 0.0;  // omega_B - omega_d, omega_B = 1
    // environment
    double temperature = 0.0;
    // sweep
    AxisSpec sweep;
    AxisSpec sweep2{"gamma_0", 1e-9, 1e-5, 100, true, "omega_B"};
    bool has_sweep2 = false;
    OracleConfig oracle;
    // output
    std::string output_path;
    std::string format = "csv";

    double omega_d() const noexcept { return 1.0 - Delta_B; }
    double kappa_t() const;
    SingleModeSetup setup() const;

    /// Absolute value of an axis point given in the axis unit.
    double to_absolute(const AxisSpec& axis, double value) const;
    /// Applies one sweep variable (absolute units) to this config.
    void apply(const std::string& variable, double value);

    /// Every resolved field as (section.key, value) with round-trip precision.
    std::vector<std::pair<std::string, std::string>> resolved() const;
    void validate() const;
};

/// Loads defaults, then the INI file (if any), then `section.key=value` overrides.
/// Throws ConfigError naming the offending field.
ScenarioConfig load_config(const std::optional<std::string>& path,
                           const std::vector<std::string>& overrides = {});

std::string format_number(double v);
std::string format_complex(Complex z);

}  // namespace tlsbath::app
