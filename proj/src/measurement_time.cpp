#include "decotime/measurement_time.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "decotime/errors.hpp"

namespace decotime::measurement {

namespace {

using core::Basis;
using dynamics::Observable;

constexpr double kHorizonFactor = 20.0;
constexpr int kMaxBisections = 200;

void require_fraction(double f) {
    if (!(f > 0.0 && f < 1.0)) {
        throw Error(ErrorCode::InvalidFraction, "f must lie strictly between 0 and 1");
    }
}

class AnalyticZModel final : public CoherenceModel {
public:
    AnalyticZModel(const DensityMatrix& rho0, const SystemParams& s, const BathParams& b, const QuadratureConfig& q)
        : rho0_(rho0), system_(s), bath_(b), quadrature_(q),
          source_(b.temperature.is_zero_temperature() ? dynamics::DecoherenceSource::Quadrature
                                                      : dynamics::DecoherenceSource::GammaClosedForm) {}

    std::complex<double> coherence(double t) override {
        return dynamics::analytic_z(rho0_, t, system_, bath_, source_, quadrature_).rho12();
    }
    Method method() const noexcept override { return Method::AnalyticZ; }

private:
    DensityMatrix rho0_;
    SystemParams system_;
    BathParams bath_;
    QuadratureConfig quadrature_;
    dynamics::DecoherenceSource source_;
};

class AnalyticXModel final : public CoherenceModel {
public:
    AnalyticXModel(const DensityMatrix& rho0, const SystemParams& s, const BathParams& b, const QuadratureConfig& q)
        : rho0_(rho0), system_(s), bath_(b), quadrature_(q) {}

    std::complex<double> coherence(double t) override {
        return dynamics::analytic_x(rho0_, t, system_, bath_, quadrature_).rho12();
    }
    Method method() const noexcept override { return Method::AnalyticX; }

private:
    DensityMatrix rho0_;
    SystemParams system_;
    BathParams bath_;
    QuadratureConfig quadrature_;
};

class LindbladModel final : public CoherenceModel {
public:
    LindbladModel(const DensityMatrix& rho0, const SystemParams& s)
        : generator_(s.system_generator()), v0_(core::change_basis(rho0, Basis::Z).vec()),
          basis_(s.measured_basis()) {}

    std::complex<double> coherence(double t) override {
        const core::Vec4 v = core::superop_exp(generator_, t) * v0_;
        const auto rho = DensityMatrix::from_propagated(core::unvectorize(v), Basis::Z);
        return core::change_basis(rho, basis_).rho12();
    }
    Method method() const noexcept override { return Method::LindbladOnly; }

private:
    core::Superoperator generator_;
    core::Vec4 v0_;
    Basis basis_;
};

class HybridModel final : public CoherenceModel {
public:
    HybridModel(const DensityMatrix& rho0, const SystemParams& s, const BathParams& b, const PropagatorConfig& c)
        : propagator_(rho0, s, b, c), basis_(s.measured_basis()) {}

    std::complex<double> coherence(double t) override {
        return core::change_basis(propagator_.state_at(t), basis_).rho12();
    }
    Method method() const noexcept override { return Method::HybridNumeric; }

private:
    dynamics::HybridPropagator propagator_;
    Basis basis_;
};

bool analytic_applies(const SystemParams& s, const BathParams& b) {
    if (s.observable == Observable::SigmaZ) {
        return true;
    }
    return b.temperature.is_zero_temperature() && s.omega0 == 0.0;
}

} // namespace

double upper_bound(double lambda, double f) {
    require_fraction(f);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::ZeroStrength, "lambda must be positive (the measurement never completes)");
    }
    return -std::log(f) / (2.0 * lambda * lambda);
}

std::string_view to_string(MethodSelector m) noexcept {
    switch (m) {
    case MethodSelector::Analytic: return "analytic";
    case MethodSelector::Lindblad: return "lindblad";
    case MethodSelector::Hybrid: return "hybrid";
    case MethodSelector::Auto: return "auto";
    }
    return "auto";
}

std::optional<MethodSelector> parse_method_selector(std::string_view text) {
    for (auto m : {MethodSelector::Analytic, MethodSelector::Lindblad, MethodSelector::Hybrid, MethodSelector::Auto}) {
        if (text == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

Method resolve_method(MethodSelector selector, const SystemParams& s, const BathParams& b) {
    const Method analytic = s.observable == Observable::SigmaZ ? Method::AnalyticZ : Method::AnalyticX;
    switch (selector) {
    case MethodSelector::Analytic: return analytic;
    case MethodSelector::Lindblad: return Method::LindbladOnly;
    case MethodSelector::Hybrid: return Method::HybridNumeric;
    case MethodSelector::Auto: break;
    }
    if (analytic_applies(s, b) && b.eta <= kWeakCouplingLimit) {
        return analytic;
    }
    return Method::HybridNumeric;
}

std::unique_ptr<CoherenceModel> make_model(Method method, const DensityMatrix& rho0, const SystemParams& s,
                                           const BathParams& b, const ModelOptions& options) {
    s.validate();
    b.validate();
    switch (method) {
    case Method::AnalyticZ: return std::make_unique<AnalyticZModel>(rho0, s, b, options.quadrature);
    case Method::AnalyticX: return std::make_unique<AnalyticXModel>(rho0, s, b, options.quadrature);
    case Method::LindbladOnly: return std::make_unique<LindbladModel>(rho0, s);
    case Method::HybridNumeric: return std::make_unique<HybridModel>(rho0, s, b, options.propagator);
    }
    throw Error(ErrorCode::InvalidParameter, "unknown method");
}

void ThresholdConfig::validate() const {
    require_fraction(f);
    if (bracket_step && (!(*bracket_step > 0.0) || !std::isfinite(*bracket_step))) {
        throw Error(ErrorCode::InvalidParameter, "bracket step must be positive");
    }
    if (!(root_rel_tol > 0.0 && root_rel_tol < 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "root tolerance must lie in (0, 1)");
    }
}

MeasurementTimeResult measurement_time(CoherenceModel& model, const SystemParams& s, const ThresholdConfig& c) {
    s.validate();
    c.validate();
    MeasurementTimeResult result;
    result.f = c.f;
    result.upper_bound = upper_bound(s.lambda, c.f);
    result.method = model.method();

    const std::complex<double> c0 = model.coherence(0.0);
    const double reference = c.criterion == Criterion::Modulus ? std::abs(c0) : c0.imag();
    if (!(std::abs(reference) > 1e-14)) {
        throw Error(ErrorCode::NoInitialCoherence, c.criterion == Criterion::Modulus
                                                       ? "rho12(0) = 0 in the measured basis"
                                                       : "Im rho12(0) = 0 in the measured basis");
    }
    auto excess = [&](double t) {
        ++result.evaluations;
        const std::complex<double> z = model.coherence(t);
        const double value = c.criterion == Criterion::Modulus ? std::abs(z) : z.imag();
        return value / reference - c.f;
    };

    const double step = c.bracket_step.value_or(result.upper_bound / 20.0);
    const double horizon = kHorizonFactor * result.upper_bound;
    double lo = 0.0;
    double hi = 0.0;
    double g_hi = 1.0 - c.f;
    for (;;) {
        lo = hi;
        hi = std::min(lo + step, horizon);
        g_hi = excess(hi);
        if (g_hi <= 0.0) {
            break;
        }
        if (hi >= horizon) {
            throw Error(ErrorCode::NoCrossingFound,
                        "no threshold crossing before 20 x the upper bound (t = " + std::to_string(horizon) + ")");
        }
    }

    while (hi - lo > c.root_rel_tol * hi && result.iterations < kMaxBisections) {
        const double mid = 0.5 * (lo + hi);
        ++result.iterations;
        const double g = excess(mid);
        if (g > 0.0) {
            lo = mid;
        } else {
            hi = mid;
            g_hi = g;
        }
    }
    result.t_m = hi;
    result.residual = g_hi;
    return result;
}

MeasurementTimeResult measurement_time(Method method, const DensityMatrix& rho0, const SystemParams& s,
                                       const BathParams& b, const ThresholdConfig& c, const ModelOptions& options) {
    auto model = make_model(method, rho0, s, b, options);
    return measurement_time(*model, s, c);
}

void SweepSpec::validate() const {
    if (lambdas.empty() || etas.empty()) {
        throw Error(ErrorCode::InvalidParameter, "sweep grids must be nonempty");
    }
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw Error(ErrorCode::ZeroStrength, "every lambda in a sweep must be positive");
        }
    }
    for (double e : etas) {
        if (!(e >= 0.0) || !std::isfinite(e)) {
            throw Error(ErrorCode::InvalidParameter, "every eta in a sweep must be >= 0");
        }
    }
    require_fraction(f);
    if (!(omega0 >= 0.0) || !(omega_c > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "sweep needs omega0 >= 0 and omega_c > 0");
    }
}

std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned jobs) {
    spec.validate();
    std::vector<double> etas = spec.etas;
    if (spec.include_baseline && std::find(etas.begin(), etas.end(), 0.0) == etas.end()) {
        etas.insert(etas.begin(), 0.0);
    }

    std::vector<SweepRow> rows;
    rows.reserve(etas.size() * spec.lambdas.size());
    for (double eta : etas) {
        for (double lambda : spec.lambdas) {
            SweepRow row;
            row.lambda = lambda;
            row.eta = eta;
            row.upper_bound = upper_bound(lambda, spec.f);
            rows.push_back(row);
        }
    }

    ThresholdConfig threshold;
    threshold.f = spec.f;
    threshold.criterion = spec.criterion;

    auto run_cell = [&](SweepRow& row) {
        try {
            const SystemParams s{spec.omega0, row.lambda, spec.observable};
            const BathParams b{row.eta, spec.omega_c, spec.temperature};
            const Method m = resolve_method(spec.method, s, b);
            row.result = measurement_time(m, spec.initial, s, b, threshold, spec.options);
            row.status = "ok";
        } catch (const Error& e) {
            row.status = std::string(to_string(e.code()));
        } catch (const std::exception&) {
            row.status = "InternalError";
        }
    };

    if (jobs == 0) {
        jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(rows.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            run_cell(rows[i]);
        }
    };
    if (jobs <= 1) {
        worker();
        return rows;
    }
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    pool.clear();
    return rows;
}

} // namespace decotime::measurement
