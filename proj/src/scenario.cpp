#include "decotime/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "decotime/errors.hpp"

namespace decotime::cli {

namespace {

using measurement::Criterion;
using measurement::MethodSelector;

[[noreturn]] void config_error(std::string_view path, std::string_view what) {
    throw Error(ErrorCode::ConfigError, std::string(path) + ": " + std::string(what));
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view path, std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
        config_error(path, "expected a finite number, got '" + std::string(text) + "'");
    }
    return v;
}

std::size_t parse_count(std::string_view path, std::string_view text) {
    text = trim(text);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        config_error(path, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

std::vector<double> parse_list(std::string_view path, std::string_view text) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_number(path, text.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return out;
}

bool parse_bool(std::string_view path, std::string_view text) {
    if (text == "true") {
        return true;
    }
    if (text == "false") {
        return false;
    }
    config_error(path, "expected true or false");
}

std::string_view criterion_name(Criterion c) { return c == Criterion::Modulus ? "modulus" : "imaginary-ratio"; }

std::string list_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + format_number(v[i]);
    }
    return s;
}

} // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ScenarioConfig::validate() const {
    if (!(system.lambda > 0.0)) {
        config_error("system.lambda", "lambda must be positive");
    }
    if (!(system.omega0 >= 0.0)) {
        config_error("system.omega0", "omega0 must be >= 0");
    }
    if (!(bath.eta >= 0.0)) {
        config_error("bath.eta", "eta must be >= 0");
    }
    if (!(bath.omega_c > 0.0)) {
        config_error("bath.omega_c", "omega_c must be positive");
    }
    if (!(f > 0.0 && f < 1.0)) {
        config_error("threshold.f", "f must lie strictly between 0 and 1");
    }
    if (!(t_end >= 0.0)) {
        config_error("time.t_end", "t_end must be >= 0");
    }
    if (samples == 0) {
        config_error("time.samples", "samples must be >= 1");
    }
    if (dt && !(*dt > 0.0)) {
        config_error("propagator.dt", "dt must be positive");
    }
    try {
        (void)initial_state();
    } catch (const Error& e) {
        config_error("initial", e.what());
    }
    if (sweep) {
        if (sweep->lambdas.empty()) {
            config_error("sweep.lambdas", "needs at least one value");
        }
        for (double l : sweep->lambdas) {
            if (!(l > 0.0)) {
                config_error("sweep.lambdas", "lambda must be positive");
            }
        }
        if (sweep->etas.empty()) {
            config_error("sweep.etas", "needs at least one value");
        }
        for (double e : sweep->etas) {
            if (!(e >= 0.0)) {
                config_error("sweep.etas", "eta must be >= 0");
            }
        }
    }
}

core::DensityMatrix ScenarioConfig::initial_state() const {
    return core::DensityMatrix::make(rho11, {re_rho12, im_rho12}, basis);
}

measurement::ThresholdConfig ScenarioConfig::threshold() const {
    measurement::ThresholdConfig t;
    t.f = f;
    t.criterion = criterion;
    return t;
}

measurement::ModelOptions ScenarioConfig::model_options() const {
    measurement::ModelOptions o;
    o.quadrature = numerics::QuadratureConfig::from_environment(o.quadrature);
    o.propagator.quadrature = o.quadrature;
    o.propagator.dt = dt;
    return o;
}

measurement::SweepSpec ScenarioConfig::sweep_spec() const {
    if (!sweep) {
        config_error("sweep", "the sweep command needs sweep.lambdas and sweep.etas");
    }
    measurement::SweepSpec s;
    s.lambdas = sweep->lambdas;
    s.etas = sweep->etas;
    s.include_baseline = sweep->baseline;
    s.f = f;
    s.observable = system.observable;
    s.omega0 = system.omega0;
    s.omega_c = bath.omega_c;
    s.temperature = bath.temperature;
    s.method = method;
    s.initial = initial_state();
    s.criterion = criterion;
    s.options = model_options();
    return s;
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig c;
    std::optional<std::vector<double>> lambdas;
    std::optional<std::vector<double>> etas;
    std::optional<bool> baseline;
    std::set<std::string> seen;

    using Setter = std::function<void(const std::string&, std::string_view)>;
    const std::map<std::string, Setter, std::less<>> setters{
        {"system.omega0", [&](auto& p, auto v) { c.system.omega0 = parse_number(p, v); }},
        {"system.lambda", [&](auto& p, auto v) { c.system.lambda = parse_number(p, v); }},
        {"system.observable",
         [&](auto& p, auto v) {
             if (v == "sigma_z") {
                 c.system.observable = dynamics::Observable::SigmaZ;
             } else if (v == "sigma_x") {
                 c.system.observable = dynamics::Observable::SigmaX;
             } else {
                 config_error(p, "expected sigma_z or sigma_x");
             }
         }},
        {"bath.eta", [&](auto& p, auto v) { c.bath.eta = parse_number(p, v); }},
        {"bath.omega_c", [&](auto& p, auto v) { c.bath.omega_c = parse_number(p, v); }},
        {"bath.beta",
         [&](auto& p, auto v) {
             if (v == "zero-temperature") {
                 c.bath.temperature = bath::InverseTemperature::zero_temperature();
                 return;
             }
             const double beta = parse_number(p, v);
             if (!(beta > 0.0)) {
                 config_error(p, "beta must be positive or 'zero-temperature'");
             }
             c.bath.temperature = bath::InverseTemperature::finite(beta);
         }},
        {"initial.rho11", [&](auto& p, auto v) { c.rho11 = parse_number(p, v); }},
        {"initial.re_rho12", [&](auto& p, auto v) { c.re_rho12 = parse_number(p, v); }},
        {"initial.im_rho12", [&](auto& p, auto v) { c.im_rho12 = parse_number(p, v); }},
        {"initial.basis",
         [&](auto& p, auto v) {
             if (v == "z") {
                 c.basis = core::Basis::Z;
             } else if (v == "x") {
                 c.basis = core::Basis::X;
             } else {
                 config_error(p, "expected z or x");
             }
         }},
        {"threshold.f", [&](auto& p, auto v) { c.f = parse_number(p, v); }},
        {"threshold.criterion",
         [&](auto& p, auto v) {
             if (v == "modulus") {
                 c.criterion = Criterion::Modulus;
             } else if (v == "imaginary-ratio") {
                 c.criterion = Criterion::ImaginaryRatio;
             } else {
                 config_error(p, "expected modulus or imaginary-ratio");
             }
         }},
        {"run.method",
         [&](auto& p, auto v) {
             const auto m = measurement::parse_method_selector(v);
             if (!m) {
                 config_error(p, "expected analytic, lindblad, hybrid or auto");
             }
             c.method = *m;
         }},
        {"time.t_end", [&](auto& p, auto v) { c.t_end = parse_number(p, v); }},
        {"time.samples", [&](auto& p, auto v) { c.samples = parse_count(p, v); }},
        {"output.format",
         [&](auto& p, auto v) {
             if (v == "csv") {
                 c.format = OutputFormat::Csv;
             } else if (v == "json") {
                 c.format = OutputFormat::Json;
             } else {
                 config_error(p, "expected csv or json");
             }
         }},
        {"output.path",
         [&](auto& p, auto v) {
             if (v.empty()) {
                 config_error(p, "empty path");
             }
             c.output_path = std::string(v);
         }},
        {"propagator.dt", [&](auto& p, auto v) { c.dt = parse_number(p, v); }},
        {"sweep.lambdas", [&](auto& p, auto v) { lambdas = parse_list(p, v); }},
        {"sweep.etas", [&](auto& p, auto v) { etas = parse_list(p, v); }},
        {"sweep.baseline", [&](auto& p, auto v) { baseline = parse_bool(p, v); }},
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            config_error("line " + std::to_string(line_no), "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            config_error(key, "unknown key");
        }
        if (!seen.insert(key).second) {
            config_error(key, "duplicate key");
        }
        it->second(key, value);
    }

    for (const char* required : {"system.lambda", "threshold.f"}) {
        if (!seen.contains(required)) {
            config_error(required, "missing required key");
        }
    }
    if (lambdas || etas || baseline) {
        if (!lambdas) {
            config_error("sweep.lambdas", "missing required key");
        }
        if (!etas) {
            config_error("sweep.etas", "missing required key");
        }
        c.sweep = SweepAxes{*lambdas, *etas, baseline.value_or(false)};
    }
    c.validate();
    return c;
}

std::string emit_config(const ScenarioConfig& c) {
    std::string out;
    auto put = [&](std::string_view key, std::string_view value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    put("system.omega0", format_number(c.system.omega0));
    put("system.lambda", format_number(c.system.lambda));
    put("system.observable", dynamics::to_string(c.system.observable));
    put("bath.eta", format_number(c.bath.eta));
    put("bath.omega_c", format_number(c.bath.omega_c));
    put("bath.beta", c.bath.temperature.is_zero_temperature() ? "zero-temperature"
                                                               : format_number(c.bath.temperature.beta()));
    put("initial.rho11", format_number(c.rho11));
    put("initial.re_rho12", format_number(c.re_rho12));
    put("initial.im_rho12", format_number(c.im_rho12));
    put("initial.basis", c.basis == core::Basis::Z ? "z" : "x");
    put("threshold.f", format_number(c.f));
    put("threshold.criterion", criterion_name(c.criterion));
    put("run.method", measurement::to_string(c.method));
    put("time.t_end", format_number(c.t_end));
    put("time.samples", std::to_string(c.samples));
    put("output.format", c.format == OutputFormat::Csv ? "csv" : "json");
    if (c.output_path) {
        put("output.path", *c.output_path);
    }
    if (c.dt) {
        put("propagator.dt", format_number(*c.dt));
    }
    if (c.sweep) {
        put("sweep.lambdas", list_text(c.sweep->lambdas));
        put("sweep.etas", list_text(c.sweep->etas));
        put("sweep.baseline", c.sweep->baseline ? "true" : "false");
    }
    return out;
}

} // namespace decotime::cli
