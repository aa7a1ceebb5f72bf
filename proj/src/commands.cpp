#include "decotime/commands.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <functional>
#include <numbers>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "decotime/errors.hpp"

#ifndef DECOTIME_VERSION
#define DECOTIME_VERSION "0.0.0"
#endif

namespace decotime::cli {

namespace {

using core::Basis;
using core::DensityMatrix;
using dynamics::Method;
using json = nlohmann::json;

struct Row {
    double t;
    DensityMatrix rho;
};

std::vector<Row> trajectory_rows(const ScenarioConfig& c, Method method) {
    const DensityMatrix rho0 = c.initial_state();
    const auto opts = c.model_options();
    std::vector<Row> rows;
    auto take = [&](const dynamics::Trajectory& traj) {
        for (const auto& s : traj.samples) {
            rows.push_back({s.t, s.rho});
        }
    };
    switch (method) {
    case Method::AnalyticZ:
    case Method::AnalyticX:
        take(dynamics::analytic_trajectory(rho0, c.t_end, c.samples, c.system, c.bath, opts.quadrature));
        break;
    case Method::LindbladOnly:
        take(dynamics::propagate_lindblad(rho0, c.t_end, c.system, c.samples));
        break;
    case Method::HybridNumeric: {
        dynamics::HybridPropagator prop(rho0, c.system, c.bath, opts.propagator);
        for (double t : dynamics::uniform_times(c.t_end, c.samples)) {
            rows.push_back({t, core::change_basis(prop.state_at(t), c.system.measured_basis())});
        }
        break;
    }
    }
    return rows;
}

json envelope(const ScenarioConfig& c, std::string_view command, json results,
              std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    json j;
    j["tool"] = "decotime";
    j["version"] = std::string(version());
    j["command"] = std::string(command);
    j["config"] = emit_config(c);
    j["results"] = std::move(results);
    j["wall_clock_seconds"] = elapsed.count();
    return j;
}

} // namespace

std::string_view version() noexcept { return DECOTIME_VERSION; }

CommandOutput run_trajectory(const ScenarioConfig& c, OutputFormat format) {
    const auto start = std::chrono::steady_clock::now();
    c.validate();
    const Method method = measurement::resolve_method(c.method, c.system, c.bath);
    const auto rows = trajectory_rows(c, method);
    const std::string method_name(dynamics::to_string(method));

    CommandOutput out;
    if (format == OutputFormat::Csv) {
        out.text = "t,rho11,re_rho12,im_rho12,abs_rho12,method\n";
        for (const auto& r : rows) {
            const auto z = r.rho.rho12();
            out.text += format_number(r.t) + ',' + format_number(r.rho.rho11()) + ',' + format_number(z.real()) +
                        ',' + format_number(z.imag()) + ',' + format_number(std::abs(z)) + ',' + method_name + '\n';
        }
        return out;
    }
    json results = json::array();
    for (const auto& r : rows) {
        const auto z = r.rho.rho12();
        results.push_back({{"t", r.t},
                           {"rho11", r.rho.rho11()},
                           {"re_rho12", z.real()},
                           {"im_rho12", z.imag()},
                           {"abs_rho12", std::abs(z)},
                           {"method", method_name}});
    }
    out.text = envelope(c, "trajectory", std::move(results), start).dump(2) + '\n';
    return out;
}

CommandOutput run_tmeasure(const ScenarioConfig& c) {
    c.validate();
    const Method method = measurement::resolve_method(c.method, c.system, c.bath);
    const auto r =
        measurement::measurement_time(method, c.initial_state(), c.system, c.bath, c.threshold(), c.model_options());
    json j{{"t_m", r.t_m},
           {"upper_bound", r.upper_bound},
           {"f", r.f},
           {"lambda", c.system.lambda},
           {"eta", c.bath.eta},
           {"residual", r.residual},
           {"method", std::string(dynamics::to_string(r.method))},
           {"iterations", r.iterations}};
    return {j.dump(2) + '\n', true};
}

CommandOutput run_sweep(const ScenarioConfig& c, OutputFormat format, unsigned jobs) {
    const auto start = std::chrono::steady_clock::now();
    c.validate();
    const auto rows = measurement::sweep(c.sweep_spec(), jobs);

    CommandOutput out;
    out.any_success = false;
    for (const auto& r : rows) {
        out.any_success = out.any_success || r.result.has_value();
    }
    if (format == OutputFormat::Csv) {
        out.text = "lambda,eta,t_m,upper_bound,status\n";
        for (const auto& r : rows) {
            out.text += format_number(r.lambda) + ',' + format_number(r.eta) + ',' +
                        (r.result ? format_number(r.result->t_m) : std::string()) + ',' +
                        format_number(r.upper_bound) + ',' + r.status + '\n';
        }
        return out;
    }
    json results = json::array();
    for (const auto& r : rows) {
        json row{{"lambda", r.lambda}, {"eta", r.eta}, {"upper_bound", r.upper_bound}, {"status", r.status}};
        row["t_m"] = r.result ? json(r.result->t_m) : json(nullptr);
        if (r.result) {
            row["method"] = std::string(dynamics::to_string(r.result->method));
        }
        results.push_back(std::move(row));
    }
    out.text = envelope(c, "sweep", std::move(results), start).dump(2) + '\n';
    return out;
}

bool run_selftest(std::ostream& out) {
    using bath::BathParams;
    using bath::InverseTemperature;
    using dynamics::Observable;
    using dynamics::SystemParams;

    bool all = true;
    auto check = [&](std::string_view name, const std::function<bool()>& body) {
        bool ok = false;
        try {
            ok = body();
        } catch (const std::exception& e) {
            out << "  error: " << e.what() << '\n';
        }
        out << (ok ? "PASS " : "FAIL ") << name << '\n';
        all = all && ok;
    };
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };

    check("gamma closed form vs frequency quadrature", [&] {
        for (double beta : {0.5, 1.0, 3.0}) {
            const BathParams b{0.05, 1.0, InverseTemperature::finite(beta)};
            for (double t : {0.3, 1.0, 4.0}) {
                const double quad = std::exp(bath::decoherence_exponent_z(t, b));
                if (rel(bath::gamma_decoherence_factor(t, b), quad) > 1e-6) {
                    return false;
                }
            }
        }
        return true;
    });

    check("zero-temperature correlation closed form", [&] {
        const BathParams b{0.3, 1.5, InverseTemperature::zero_temperature()};
        for (double t : {0.0, 0.4, 3.0, 20.0}) {
            const std::complex<double> d{1.0, b.omega_c * t};
            const auto exact = b.eta * b.omega_c * b.omega_c / (d * d);
            if (std::abs(bath::bath_correlation(t, b) - exact) > 1e-10) {
                return false;
            }
        }
        return true;
    });

    check("g1(0) = 2 g0 and A(0) = B(0) = 0", [&] {
        const BathParams b{0.1, 1.0, InverseTemperature::zero_temperature()};
        const double g0 = bath::g0(b, 1.0);
        return rel(bath::g1(0.0, b, 1.0), 2.0 * g0) < 1e-10 && bath::g2(0.0, b, 1.0) == 0.0 &&
               bath::a_plus(0.0, 1.0, b, 1.0) == 0.0 && bath::b_minus(0.0, 1.0, b, 1.0) == 0.0;
    });

    check("semigroup property of the system generator", [&] {
        const SystemParams s{0.4, 0.8, Observable::SigmaX};
        const auto k = s.system_generator();
        const auto lhs = core::superop_exp(k, 0.7);
        const auto rhs = core::superop_exp(k, 0.3) * core::superop_exp(k, 0.4);
        return (lhs - rhs).norm() < 1e-12;
    });

    check("eta = 0 measurement time equals the bound", [&] {
        const BathParams b{};
        const auto rho0 = core::superposition_state(1.25 * std::numbers::pi);
        measurement::ThresholdConfig tc;
        for (auto obs : {Observable::SigmaZ, Observable::SigmaX}) {
            const SystemParams s{0.0, 1.3, obs};
            const auto m = measurement::resolve_method(measurement::MethodSelector::Auto, s, b);
            const auto r = measurement::measurement_time(m, rho0, s, b, tc);
            if (rel(r.t_m, r.upper_bound) > 1e-8) {
                return false;
            }
        }
        return true;
    });

    check("analytic sigma_x solution vs hybrid propagation", [&] {
        const SystemParams s{0.0, 1.0, Observable::SigmaX};
        const BathParams b{0.05, 1.0, InverseTemperature::zero_temperature()};
        const auto rho0 = core::superposition_state(1.25 * std::numbers::pi);
        dynamics::HybridPropagator prop(rho0, s, b);
        for (double t : {0.25, 0.75, 1.0}) {
            const double hybrid = std::abs(core::change_basis(prop.state_at(t), Basis::X).rho12());
            const double analytic = std::abs(dynamics::analytic_x(rho0, t, s, b).rho12());
            if (rel(hybrid, analytic) > 0.02) {
                return false;
            }
        }
        return true;
    });

    return all;
}

} // namespace decotime::cli
