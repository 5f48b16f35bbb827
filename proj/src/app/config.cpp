#include "tlsbath/app/config.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tlsbath/errors.hpp"

namespace tlsbath::app {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"mode", {"Delta_0", "gamma_0", "Omega_0"}},
        {"tls", {"N", "G", "kappa1", "kappa2", "Omega_B", "Delta_B"}},
        {"environment", {"temperature"}},
        {"sweep",
         {"variable", "min", "max", "count", "spacing", "unit", "variable2", "min2", "max2", "count2",
          "spacing2", "unit2"}},
        {"oracle", {"ratios", "fock_dim", "dimension_cap", "target_occupation"}},
        {"output", {"path", "format"}},
    };
    return keys;
}

const std::set<std::string> kSweepVariables{"Omega_B", "Delta_B", "Delta_0", "gamma_0", "tau"};
const std::set<std::string> kUnits{"omega_B", "kappa_t", "kappa1", "gamma_total"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct Quantity {
    Complex value;
    std::string unit;  // empty = absolute
};

// "<number>", "(<re>,<im>)", optionally followed by a unit word.
Quantity parse_quantity(const std::string& field, const std::string& text) {
    std::istringstream in(trim(text));
    Complex z;
    if (!(in >> z)) throw ConfigError(field, "expected a number or (re,im), got '" + text + "'");
    std::string unit;
    in >> unit;
    std::string rest;
    if (in >> rest) throw ConfigError(field, "trailing text '" + rest + "'");
    if (!unit.empty() && unit != "omega_B" && unit != "kappa_t" && unit != "kappa1") {
        throw ConfigError(field, "unknown unit '" + unit + "' (omega_B, kappa_t, kappa1)");
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ConfigError(field, "value must be finite");
    return {z, unit};
}

double parse_real(const std::string& field, const std::string& text) {
    const Quantity q = parse_quantity(field, text);
    if (!q.unit.empty()) throw ConfigError(field, "units are not accepted here");
    if (q.value.imag() != 0.0) throw ConfigError(field, "expected a real number");
    return q.value.real();
}

std::size_t parse_count(const std::string& field, const std::string& text) {
    const double v = parse_real(field, text);
    if (v < 0.0 || v != std::floor(v) || v > 1e9) throw ConfigError(field, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

bool parse_spacing(const std::string& field, const std::string& text) {
    const std::string s = trim(text);
    if (s == "log") return true;
    if (s == "linear") return false;
    throw ConfigError(field, "spacing must be 'linear' or 'log'");
}

double unit_scale(const std::string& unit, double kappa_t, double kappa1) {
    if (unit.empty() || unit == "omega_B") return 1.0;
    if (unit == "kappa_t") return kappa_t;
    return kappa1;
}

void validate_axis(const AxisSpec& a, const std::string& prefix, const std::string& suffix) {
    if (!kSweepVariables.count(a.variable)) {
        throw ConfigError(prefix + "variable" + suffix,
                          "unknown sweep variable '" + a.variable + "' (Omega_B, Delta_B, Delta_0, gamma_0, tau)");
    }
    if (!kUnits.count(a.unit)) throw ConfigError(prefix + "unit" + suffix, "unknown unit '" + a.unit + "'");
    if ((a.unit == "gamma_total") != (a.variable == "tau") && a.unit != "omega_B") {
        throw ConfigError(prefix + "unit" + suffix, "unit '" + a.unit + "' does not apply to " + a.variable);
    }
    if (a.count < 2) throw ConfigError(prefix + "count" + suffix, "sweep count must be >= 2");
    if (!(a.min < a.max)) throw ConfigError(prefix + "min" + suffix, "sweep min must be < max");
    if (a.log && !(a.min > 0.0)) throw ConfigError(prefix + "min" + suffix, "log spacing needs min > 0");
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(Complex z) {
    return "(" + format_number(z.real()) + "," + format_number(z.imag()) + ")";
}

std::vector<double> AxisSpec::grid() const {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(count - 1);
        out[k] = log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
    }
    out.front() = min;
    out.back() = max;
    return out;
}

double ScenarioConfig::kappa_t() const { return transverse_rate(setup().tls(), setup().environment()); }

SingleModeSetup ScenarioConfig::setup() const {
    SingleModeSetup s;
    s.tls_count = N;
    s.coupling = G;
    s.omega_B = 1.0;
    s.kappa1 = kappa1;
    s.kappa2 = kappa2;
    s.Omega_B = Omega_B;
    s.omega_d = omega_d();
    s.omega_0 = s.omega_d + Delta_0;
    s.gamma_0 = gamma_0;
    s.Omega_0 = Omega_0;
    s.temperature = temperature;
    return s;
}

double ScenarioConfig::to_absolute(const AxisSpec& axis, double value) const {
    if (axis.variable == "tau") {
        if (axis.unit == "gamma_total") {
            const SingleModeRates r = setup().rates();
            const double gt = gamma_0 + r.gamma;
            if (!(gt > 0.0)) throw InvalidParameter("tau axis in 1/gamma_total needs gamma_0 + gamma > 0");
            return value / gt;
        }
        return value;
    }
    return value * unit_scale(axis.unit == "omega_B" ? "" : axis.unit, kappa_t(), kappa1);
}

void ScenarioConfig::apply(const std::string& variable, double value) {
    if (variable == "Omega_B") {
        Omega_B = value;
    } else if (variable == "Delta_B") {
        Delta_B = value;
    } else if (variable == "Delta_0") {
        Delta_0 = value;
    } else if (variable == "gamma_0") {
        gamma_0 = value;
    } else if (variable != "tau") {
        throw ConfigError("sweep.variable", "unknown sweep variable '" + variable + "'");
    }
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::resolved() const {
    std::vector<std::pair<std::string, std::string>> out{
        {"mode.Delta_0", format_number(Delta_0)},
        {"mode.gamma_0", format_number(gamma_0)},
        {"mode.Omega_0", format_complex(Omega_0)},
        {"tls.N", format_number(N)},
        {"tls.G", format_complex(G)},
        {"tls.kappa1", format_number(kappa1)},
        {"tls.kappa2", format_number(kappa2)},
        {"tls.Omega_B", format_complex(Omega_B)},
        {"tls.Delta_B", format_number(Delta_B)},
        {"environment.temperature", format_number(temperature)},
        {"sweep.variable", sweep.variable},
        {"sweep.min", format_number(sweep.min)},
        {"sweep.max", format_number(sweep.max)},
        {"sweep.count", std::to_string(sweep.count)},
        {"sweep.spacing", sweep.log ? "log" : "linear"},
        {"sweep.unit", sweep.unit},
    };
    if (has_sweep2) {
        out.insert(out.end(), {{"sweep.variable2", sweep2.variable},
                               {"sweep.min2", format_number(sweep2.min)},
                               {"sweep.max2", format_number(sweep2.max)},
                               {"sweep.count2", std::to_string(sweep2.count)},
                               {"sweep.spacing2", sweep2.log ? "log" : "linear"},
                               {"sweep.unit2", sweep2.unit}});
    }
    std::string ratios;
    for (std::size_t k = 0; k < oracle.ratios.size(); ++k) {
        ratios += (k ? "," : "") + format_number(oracle.ratios[k]);
    }
    out.insert(out.end(), {{"oracle.ratios", ratios},
                           {"oracle.fock_dim", std::to_string(oracle.fock_dim)},
                           {"oracle.dimension_cap", std::to_string(oracle.dimension_cap)},
                           {"oracle.target_occupation", format_number(oracle.target_occupation)}});
    return out;
}

void ScenarioConfig::validate() const {
    if (!(N > 0.0)) throw ConfigError("tls.N", "TLS count must be > 0");
    if (!(kappa1 > 0.0)) throw ConfigError("tls.kappa1", "must be > 0");
    if (!(kappa2 >= 0.0)) throw ConfigError("tls.kappa2", "must be >= 0");
    if (!(gamma_0 >= 0.0)) throw ConfigError("mode.gamma_0", "must be >= 0");
    if (!(temperature >= 0.0)) throw ConfigError("environment.temperature", "must be >= 0");
    if (!(Delta_B < 1.0)) throw ConfigError("tls.Delta_B", "drive frequency 1 - Delta_B must be > 0");
    if (!(omega_d() + Delta_0 > 0.0)) throw ConfigError("mode.Delta_0", "mode frequency must be > 0");
    validate_axis(sweep, "sweep.", "");
    if (has_sweep2) validate_axis(sweep2, "sweep.", "2");
    if (oracle.ratios.empty()) throw ConfigError("oracle.ratios", "need at least one ratio");
    for (const double r : oracle.ratios) {
        if (!(r > 0.0)) throw ConfigError("oracle.ratios", "ratios must be > 0");
    }
    if (oracle.fock_dim < 2) throw ConfigError("oracle.fock_dim", "must be >= 2");
    if (oracle.dimension_cap < 4 || oracle.dimension_cap > 256) {
        throw ConfigError("oracle.dimension_cap", "must be in [4, 256]");
    }
    if (!(oracle.target_occupation > 0.0)) throw ConfigError("oracle.target_occupation", "must be > 0");
    if (format != "csv" && format != "json") throw ConfigError("output.format", "must be csv or json");
}

ScenarioConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
    pt::ptree tree;
    if (path) {
        try {
            pt::read_ini(*path, tree);
        } catch (const pt::ini_parser_error& e) {
            throw ConfigError("<file>", e.what());
        }
    }
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError(item, "override must look like section.key=value");
        const std::string key = trim(item.substr(0, eq));
        if (key.find('.') == std::string::npos) throw ConfigError(key, "override key needs a section");
        tree.put(pt::ptree::path_type(key, '.'), trim(item.substr(eq + 1)));
    }

    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end()) throw ConfigError(section, "unknown section");
        if (!body.data().empty() && body.empty()) throw ConfigError(section, "top-level keys need a section");
        for (const auto& [key, value] : body) {
            if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
            if (!value.empty()) throw ConfigError(section + "." + key, "nested keys are not allowed");
        }
    }

    const auto get = [&](const std::string& field) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(field, '.'))) return trim(*v);
        return std::nullopt;
    };

    ScenarioConfig c;
    if (auto v = get("tls.kappa1")) c.kappa1 = parse_real("tls.kappa1", *v);
    if (auto v = get("tls.kappa2")) c.kappa2 = parse_real("tls.kappa2", *v);
    if (auto v = get("environment.temperature")) c.temperature = parse_real("environment.temperature", *v);
    if (!(c.kappa1 > 0.0)) throw ConfigError("tls.kappa1", "must be > 0");
    if (!(c.kappa2 >= 0.0)) throw ConfigError("tls.kappa2", "must be >= 0");
    if (!(c.temperature >= 0.0)) throw ConfigError("environment.temperature", "must be >= 0");
    const double kt = c.kappa_t();

    const auto scaled = [&](const std::string& field, const std::string& text) {
        const Quantity q = parse_quantity(field, text);
        return q.value * unit_scale(q.unit, kt, c.kappa1);
    };
    const auto scaled_real = [&](const std::string& field, const std::string& text) {
        const Complex z = scaled(field, text);
        if (z.imag() != 0.0) throw ConfigError(field, "expected a real number");
        return z.real();
    };

    if (auto v = get("tls.N")) c.N = parse_real("tls.N", *v);
    if (auto v = get("tls.G")) c.G = scaled("tls.G", *v);
    if (auto v = get("tls.Omega_B")) c.Omega_B = scaled("tls.Omega_B", *v);
    if (auto v = get("tls.Delta_B")) c.Delta_B = scaled_real("tls.Delta_B", *v);
    if (auto v = get("mode.Delta_0")) c.Delta_0 = scaled_real("mode.Delta_0", *v);
    if (auto v = get("mode.gamma_0")) c.gamma_0 = scaled_real("mode.gamma_0", *v);
    if (auto v = get("mode.Omega_0")) c.Omega_0 = scaled("mode.Omega_0", *v);

    const auto read_axis = [&](AxisSpec& a, const std::string& suffix) {
        if (auto v = get("sweep.variable" + suffix)) a.variable = *v;
        if (auto v = get("sweep.min" + suffix)) a.min = parse_real("sweep.min" + suffix, *v);
        if (auto v = get("sweep.max" + suffix)) a.max = parse_real("sweep.max" + suffix, *v);
        if (auto v = get("sweep.count" + suffix)) a.count = parse_count("sweep.count" + suffix, *v);
        if (auto v = get("sweep.spacing" + suffix)) a.log = parse_spacing("sweep.spacing" + suffix, *v);
        if (auto v = get("sweep.unit" + suffix)) a.unit = *v;
    };
    read_axis(c.sweep, "");
    for (const char* key : {"variable2", "min2", "max2", "count2", "spacing2", "unit2"}) {
        if (get(std::string("sweep.") + key)) c.has_sweep2 = true;
    }
    read_axis(c.sweep2, "2");

    if (auto v = get("oracle.ratios")) {
        c.oracle.ratios.clear();
        std::stringstream in(*v);
        std::string item;
        while (std::getline(in, item, ',')) c.oracle.ratios.push_back(parse_real("oracle.ratios", item));
    }
    if (auto v = get("oracle.fock_dim")) c.oracle.fock_dim = parse_count("oracle.fock_dim", *v);
    if (auto v = get("oracle.dimension_cap")) c.oracle.dimension_cap = parse_count("oracle.dimension_cap", *v);
    if (auto v = get("oracle.target_occupation")) {
        c.oracle.target_occupation = parse_real("oracle.target_occupation", *v);
    }
    if (auto v = get("output.path")) c.output_path = *v;
    if (auto v = get("output.format")) c.format = *v;

    c.validate();
    return c;
}

}  // namespace tlsbath::app
