#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tlsbath/app/config.hpp"
#include "tlsbath/app/scenarios.hpp"
#include "tlsbath/app/validation.hpp"
#include "tlsbath/errors.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out;
    unsigned jobs = 1;
    std::string format;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "INI configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--set", o.overrides, "Override as section.key=value (repeatable)");
    cmd->add_option("--out", o.out, "Output file (default: stdout)");
    cmd->add_option("--jobs", o.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

tlsbath::app::ScenarioConfig load(const CommonOptions& o) {
    std::optional<std::string> path;
    if (!o.config_path.empty()) path = o.config_path;
    return tlsbath::app::load_config(path, o.overrides);
}

void emit(const tlsbath::app::SweepResult& result, const tlsbath::app::ScenarioConfig& config,
          const CommonOptions& o) {
    const std::string format = o.format.empty() ? config.format : o.format;
    const std::string path = o.out.empty() ? config.output_path : o.out;
    const std::string stamp = tlsbath::app::timestamp_utc();
    const auto write = [&](std::ostream& out) {
        if (format == "json") {
            tlsbath::app::write_json(out, result, stamp);
        } else {
            tlsbath::app::write_csv(out, result, stamp);
        }
    };
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream file(path);
    if (!file) throw tlsbath::ConfigError("output.path", "cannot open '" + path + "' for writing");
    write(file);
}

int report_validation(const std::vector<tlsbath::app::CriterionResult>& results, const CommonOptions& o) {
    using tlsbath::app::Status;
    bool failed = false;
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!o.out.empty() && o.out != "-") {
        file.open(o.out);
        if (!file) throw tlsbath::ConfigError("--out", "cannot open '" + o.out + "' for writing");
        out = &file;
    }
    if (o.format == "json") {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& r : results) {
            j.push_back({{"id", r.id}, {"name", r.name}, {"status", tlsbath::app::to_string(r.status)},
                         {"measured", r.measured}, {"tolerance", r.tolerance}, {"detail", r.detail},
                         {"seconds", r.seconds}});
        }
        *out << j.dump(2) << "\n";
    }
    for (const auto& r : results) {
        if (r.status == Status::Fail) failed = true;
        if (o.format == "json") continue;
        *out << "[" << tlsbath::app::to_string(r.status) << "] " << r.id << ". " << r.name << ": "
             << r.measured << " | required " << r.tolerance << " | " << r.seconds << " s";
        if (!r.detail.empty()) *out << " | " << r.detail;
        *out << "\n";
    }
    return failed ? kExitValidation : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effective dynamics of bosonic modes coupled to a driven two-level-system bath"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string scenario;

    auto* rates = app.add_subcommand("rates", "Rates at a single parameter point");
    auto* sweep = app.add_subcommand("sweep", "Run a named sweep scenario");
    sweep->add_option("scenario", scenario, "Scenario name")
        ->required()
        ->check(CLI::IsMember(tlsbath::app::scenario_names()));
    auto* steady = app.add_subcommand("steady-state", "Steady state at a single parameter point");
    auto* stab = app.add_subcommand("stability-map", "2-D stability map over sweep and sweep2 axes");
    auto* squeeze = app.add_subcommand("squeezing", "Squeezing parameter with and without g");
    auto* coherence = app.add_subcommand("coherence", "First-order coherence g1(tau)");
    auto* oracle = app.add_subcommand("oracle-validate", "Effective model vs exact Lindblad oracle");
    auto* validate = app.add_subcommand("validate-all", "Run the acceptance suite");

    for (auto* cmd : {rates, sweep, steady, stab, squeeze, coherence, oracle, validate}) add_common(cmd, opts);
    std::size_t oracle_cap = 64;
    validate->add_option("--oracle-dimension-cap", oracle_cap, "Hilbert dimension cap for the oracle check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (validate->parsed()) {
            tlsbath::app::ValidationOptions v;
            v.oracle_dimension_cap = oracle_cap;
            v.jobs = opts.jobs;
            return report_validation(tlsbath::app::validate_all(v), opts);
        }
        tlsbath::app::ScenarioConfig config = load(opts);
        if (rates->parsed()) {
            emit(tlsbath::app::rates_table(config), config, opts);
        } else if (steady->parsed()) {
            emit(tlsbath::app::steady_state_point(config), config, opts);
        } else {
            std::string name = scenario;
            if (stab->parsed()) name = "stability-map";
            if (squeeze->parsed()) name = "squeezing";
            if (coherence->parsed()) name = "coherence";
            if (oracle->parsed()) name = "oracle-validate";
            if (name == "stability-map") config.has_sweep2 = true;
            emit(tlsbath::app::run_scenario(name, config, opts.jobs), config, opts);
        }
    } catch (const tlsbath::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tlsbath::InvalidParameter& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tlsbath::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
