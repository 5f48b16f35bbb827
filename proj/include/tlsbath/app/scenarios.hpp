#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tlsbath/app/config.hpp"

namespace tlsbath::app {

/// A missing cell is written as the "unstable" sentinel.
using Cell = std::optional<double>;

struct SweepResult {
    std::string scenario;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

const std::vector<std::string>& scenario_names();

/// Runs a named scenario. Rows are computed on `jobs` worker threads and
/// returned in sweep order.
SweepResult run_scenario(const std::string& name, const ScenarioConfig& config, unsigned jobs = 1);

/// Single-point rate table for the configured parameters.
SweepResult rates_table(const ScenarioConfig& config);

/// Single-point steady state for the configured parameters.
SweepResult steady_state_point(const ScenarioConfig& config);

struct OracleComparison {
    double ratio = 0.0;  // G / kappa_t
    double G = 0.0;
    double gamma_0 = 0.0;
    std::size_t fock_dim = 0;
    double leak = 0.0;
    bool truncation_warning = false;
    double n_effective = 0.0;
    double n_exact = 0.0;
    Complex s_effective, s_exact;
    Complex s2_effective, s2_exact;
    double error_n = 0.0;
    double error_s = 0.0;
    double error_s2 = 0.0;
};

/// Effective model vs exact full-Lindblad steady state for one TLS, resonant
/// drive at saturation s = 1 and G = ratio * kappa_t. gamma_0 is chosen so that
/// the coherent occupation is close to `oracle.target_occupation`.
OracleComparison oracle_comparison(const ScenarioConfig& config, double ratio);

std::string timestamp_utc();
void write_csv(std::ostream& out, const SweepResult& result, const std::string& timestamp);
void write_json(std::ostream& out, const SweepResult& result, const std::string& timestamp);

}  // namespace tlsbath::app
