#include "decotime/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "decotime/errors.hpp"

namespace decotime::dynamics {

namespace {

using core::Basis;
using core::cplx;
using core::Operator2;
using core::Superoperator;
using core::Vec4;

constexpr cplx kI{0.0, 1.0};
constexpr double kPositivityTol = 1e-8;
constexpr double kTraceDriftLimit = 1e-6;

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw Error(ErrorCode::InvalidParameter, "time must be finite and non-negative");
    }
}

void record(Trajectory& traj, double t, const DensityMatrix& rho) {
    const double margin = rho.positivity_margin();
    if (traj.samples.empty()) {
        traj.min_positivity_margin = margin;
    } else {
        traj.min_positivity_margin = std::min(traj.min_positivity_margin, margin);
    }
    if (!rho.is_positive(kPositivityTol)) {
        ++traj.positivity_violations;
    }
    traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(rho.trace() - 1.0));
    traj.samples.push_back({t, rho, std::abs(rho.rho12())});
}

// Composite Simpson weights (in units of h) for nodes 0..m; 3/8 rule on the
// last three panels when m is odd, trapezoid for m = 1.
std::vector<double> memory_weights(std::size_t m) {
    std::vector<double> w(m + 1, 0.0);
    if (m == 0) {
        return w;
    }
    if (m == 1) {
        w[0] = w[1] = 0.5;
        return w;
    }
    const std::size_t simpson_end = (m % 2 == 0) ? m : m - 3;
    for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) {
        w[j] += 1.0 / 3.0;
        w[j + 1] += 4.0 / 3.0;
        w[j + 2] += 1.0 / 3.0;
    }
    if (m % 2 == 1) {
        const std::size_t j = m - 3;
        w[j] += 3.0 / 8.0;
        w[j + 1] += 9.0 / 8.0;
        w[j + 2] += 9.0 / 8.0;
        w[j + 3] += 3.0 / 8.0;
    }
    return w;
}

Vec4 hermitian_part(const Vec4& v) {
    const Operator2 m = core::unvectorize(v);
    return core::vectorize(0.5 * (m + m.adjoint()));
}

} // namespace

std::string_view to_string(Observable o) noexcept {
    return o == Observable::SigmaZ ? "sigma_z" : "sigma_x";
}

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::AnalyticZ: return "analytic_z";
        case Method::AnalyticX: return "analytic_x";
        case Method::LindbladOnly: return "lindblad";
        case Method::HybridNumeric: return "hybrid";
    }
    return "unknown";
}

void SystemParams::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::ZeroStrength, "lambda must be positive");
    }
    if (!(omega0 >= 0.0) || !std::isfinite(omega0)) {
        throw Error(ErrorCode::InvalidParameter, "omega0 must be >= 0");
    }
}

double SystemParams::omega_rate() const {
    const double radicand = std::pow(lambda, 4) - 4.0 * omega0 * omega0;
    if (radicand < 0.0) {
        throw Error(ErrorCode::DegenerateOmega, "lambda^4 < 4 omega0^2 makes Omega imaginary");
    }
    return std::sqrt(radicand);
}

Operator2 SystemParams::hamiltonian() const { return omega0 * core::sigma_z(); }

Operator2 SystemParams::lindblad_operator() const {
    return lambda * (observable == Observable::SigmaZ ? core::sigma_z() : core::sigma_x());
}

Superoperator SystemParams::system_generator() const {
    return core::lindblad_generator(hamiltonian(), lindblad_operator());
}

Basis SystemParams::measured_basis() const {
    return observable == Observable::SigmaZ ? Basis::Z : Basis::X;
}

DensityMatrix analytic_z(const DensityMatrix& rho0, double t, const SystemParams& s, const BathParams& b,
                         DecoherenceSource source, const QuadratureConfig& q) {
    s.validate();
    b.validate();
    require_time(t);
    if (s.observable != Observable::SigmaZ) {
        throw Error(ErrorCode::WrongObservable, "analytic_z needs the sigma_z measurement");
    }
    const DensityMatrix r0 = core::change_basis(rho0, Basis::Z);
    if (t == 0.0) {
        return r0;
    }
    double bath_factor = 1.0;
    if (source == DecoherenceSource::GammaClosedForm) {
        if (b.temperature.is_zero_temperature()) {
            throw Error(ErrorCode::ZeroTemperatureUnsupported,
                        "the Gamma closed form needs finite beta; use the quadrature source at T = 0");
        }
        bath_factor = bath::gamma_decoherence_factor(t, b);
    } else {
        bath_factor = std::exp(bath::decoherence_exponent_z(t, b, q));
    }
    const double lam2 = s.lambda * s.lambda;
    const cplx rho12 = r0.rho12() * bath_factor * std::exp(-2.0 * lam2 * t) * std::exp(-2.0 * kI * s.omega0 * t);
    return DensityMatrix::make(r0.rho11(), rho12, Basis::Z);
}

DensityMatrix analytic_x(const DensityMatrix& rho0, double t, const SystemParams& s, const BathParams& b,
                         const QuadratureConfig& q) {
    s.validate();
    b.validate();
    require_time(t);
    if (s.observable != Observable::SigmaX) {
        throw Error(ErrorCode::WrongObservable, "analytic_x needs the sigma_x measurement");
    }
    if (!b.temperature.is_zero_temperature()) {
        throw Error(ErrorCode::RequiresZeroTemperature, "analytic_x is only valid at T = 0");
    }
    if (s.omega0 != 0.0) {
        throw Error(ErrorCode::RequiresZeroSplitting, "analytic_x is only valid for omega0 = 0");
    }
    const DensityMatrix r0 = core::change_basis(rho0, Basis::Z);
    const double lam2 = s.lambda * s.lambda;
    const double decay = std::exp(-2.0 * lam2 * t);

    double pop_exponent = 0.0;
    double coh_exponent = 0.0;
    if (b.eta != 0.0 && t > 0.0) {
        const double om = s.omega_rate();
        const double g0 = bath::g0(b, om, q);
        const double ap = bath::a_plus(t, s.lambda, b, om, q);
        const double am = bath::a_minus(t, s.lambda, b, om, q);
        const double bp = bath::b_plus(t, s.lambda, b, om, q);
        const double bm = bath::b_minus(t, s.lambda, b, om, q);
        const double k = b.eta * lam2;
        pop_exponent = -8.0 * k * g0 * t + 4.0 * k * (am - bm);
        coh_exponent = 8.0 * k * g0 * t - 4.0 * k * (ap + bp);
    }
    const double rho11_x = 0.5 + r0.rho12().real() * std::exp(pop_exponent);
    const cplx rho12_x =
        0.5 * (2.0 * r0.rho11() - 1.0) * decay - kI * r0.rho12().imag() * decay * std::exp(coh_exponent);

    Operator2 m;
    m << rho11_x, rho12_x, std::conj(rho12_x), 1.0 - rho11_x;
    return DensityMatrix::from_propagated(m, Basis::X);
}

std::vector<double> uniform_times(double t_end, std::size_t samples) {
    require_time(t_end);
    if (t_end == 0.0 || samples <= 1) {
        return {0.0};
    }
    std::vector<double> ts(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        ts[k] = t_end * static_cast<double>(k) / static_cast<double>(samples - 1);
    }
    ts.back() = t_end;
    return ts;
}

Trajectory analytic_trajectory(const DensityMatrix& rho0, double t_end, std::size_t samples, const SystemParams& s,
                               const BathParams& b, const QuadratureConfig& q) {
    Trajectory traj;
    traj.system = s;
    traj.bath = b;
    const bool z_measured = s.observable == Observable::SigmaZ;
    traj.method = z_measured ? Method::AnalyticZ : Method::AnalyticX;
    const auto source =
        b.temperature.is_zero_temperature() ? DecoherenceSource::Quadrature : DecoherenceSource::GammaClosedForm;
    for (double t : uniform_times(t_end, samples)) {
        record(traj, t, z_measured ? analytic_z(rho0, t, s, b, source, q) : analytic_x(rho0, t, s, b, q));
    }
    return traj;
}

Trajectory propagate_lindblad(const DensityMatrix& rho0, double t_end, const SystemParams& s, std::size_t samples) {
    s.validate();
    Trajectory traj;
    traj.method = Method::LindbladOnly;
    traj.system = s;
    const Superoperator k = s.system_generator();
    const Vec4 v0 = core::change_basis(rho0, Basis::Z).vec();
    for (double t : uniform_times(t_end, samples)) {
        const Vec4 v = core::superop_exp(k, t) * v0;
        const auto rho = DensityMatrix::from_propagated(core::unvectorize(v), Basis::Z);
        record(traj, t, core::change_basis(rho, s.measured_basis()));
    }
    return traj;
}

void PropagatorConfig::validate() const {
    if (dt && (!(*dt > 0.0) || !std::isfinite(*dt))) {
        throw Error(ErrorCode::InvalidParameter, "propagator dt must be positive");
    }
    if (output_stride == 0) {
        throw Error(ErrorCode::InvalidParameter, "output stride must be >= 1");
    }
    quadrature.validate();
}

double PropagatorConfig::default_dt(const SystemParams& s, const BathParams& b) {
    const double measurement = 1e-3 / (s.lambda * s.lambda);
    const double bath_scale = b.temperature.is_zero_temperature() ? 1e-3 / b.omega_c : 1e-3 * b.temperature.beta();
    return std::min(measurement, bath_scale);
}

double PropagatorConfig::resolve_dt(const SystemParams& s, const BathParams& b) const {
    return dt ? *dt : default_dt(s, b);
}

HybridPropagator::HybridPropagator(const DensityMatrix& rho0, const SystemParams& s, const BathParams& b,
                                   const PropagatorConfig& c)
    : system_(s), bath_(b), config_(c) {
    s.validate();
    b.validate();
    c.validate();
    dt_ = c.resolve_dt(s, b);
    half_ = 0.5 * dt_;
    generator_ = s.system_generator();
    commutator_ = core::left_multiplication(core::sigma_z()) - core::right_multiplication(core::sigma_z());
    anticommutator_ = core::anticommutator_superop(core::sigma_z());

    const Vec4 v0 = core::change_basis(rho0, Basis::Z).vec();
    alpha_.push_back(v0);
    derivative_.push_back(Vec4::Zero()); // R(0) = 0
}

void HybridPropagator::extend_lattice(std::size_t m) {
    while (correlation_.size() <= m) {
        const double tau = static_cast<double>(correlation_.size()) * half_;
        correlation_.push_back(bath_.eta == 0.0 ? cplx{0.0, 0.0}
                                                : bath::bath_correlation(tau, bath_, config_.quadrature));
        const Superoperator fwd = core::superop_exp(generator_, tau);
        const Superoperator bwd = core::superop_exp(generator_, -tau);
        commutator_pic_.push_back(bwd * commutator_ * fwd);
        anticommutator_pic_.push_back(bwd * anticommutator_ * fwd);
    }
    if (memory_.size() <= m) {
        memory_.resize(m + 1);
    }
}

const Superoperator& HybridPropagator::memory_generator(std::size_t m) {
    extend_lattice(m);
    auto& slot = memory_[m];
    if (!slot) {
        Superoperator inner = Superoperator::Zero();
        if (bath_.eta != 0.0 && m > 0) {
            const auto w = memory_weights(m);
            for (std::size_t j = 0; j <= m; ++j) {
                const cplx c = correlation_[m - j];
                inner += (w[j] * c.real()) * commutator_pic_[j] + (w[j] * c.imag()) * kI * anticommutator_pic_[j];
            }
            inner *= half_;
        }
        slot = -(commutator_pic_[m] * inner);
    }
    return *slot;
}

void HybridPropagator::step() {
    const std::size_t n = steps();
    const Vec4& a = alpha_[n];
    // copies: memory_generator may grow the cache and invalidate references
    const Superoperator r0 = memory_generator(2 * n);
    const Superoperator r1 = memory_generator(2 * n + 1);
    const Superoperator r2 = memory_generator(2 * n + 2);

    const Vec4 k1 = r0 * a;
    const Vec4 k2 = r1 * (a + half_ * k1);
    const Vec4 k3 = r1 * (a + half_ * k2);
    const Vec4 k4 = r2 * (a + dt_ * k3);
    Vec4 next = hermitian_part(a + (dt_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));

    if (!next.allFinite()) {
        throw Error(ErrorCode::NonFinite, "hybrid propagation produced non-finite values");
    }
    const double drift = std::abs((core::trace_functional() * next)(0).real() - 1.0);
    max_trace_drift_ = std::max(max_trace_drift_, drift);
    if (drift > kTraceDriftLimit) {
        throw Error(ErrorCode::StepSizeTooLarge, "trace drift " + std::to_string(drift) + " exceeds 1e-6");
    }
    derivative_.push_back(r2 * next);
    alpha_.push_back(std::move(next));
}

void HybridPropagator::advance_to(double t) {
    require_time(t);
    while (time() < t * (1.0 - 1e-14)) {
        step();
    }
}

Vec4 HybridPropagator::to_rho(const Vec4& alpha, double t) const {
    return core::superop_exp(generator_, t) * alpha;
}

DensityMatrix HybridPropagator::state_at_step(std::size_t n) const {
    if (n > steps()) {
        throw Error(ErrorCode::InvalidParameter, "step index beyond the integrated range");
    }
    const double t = static_cast<double>(n) * dt_;
    return DensityMatrix::from_propagated(core::unvectorize(to_rho(alpha_[n], t)), Basis::Z);
}

DensityMatrix HybridPropagator::state_at(double t) {
    advance_to(t);
    const double pos = t / dt_;
    auto n = static_cast<std::size_t>(std::floor(pos));
    if (n >= steps()) {
        n = steps() == 0 ? 0 : steps() - 1;
    }
    const double theta = pos - static_cast<double>(n);
    if (steps() == 0 || theta == 0.0) {
        return DensityMatrix::from_propagated(core::unvectorize(to_rho(alpha_[n], t)), Basis::Z);
    }
    const double th2 = theta * theta;
    const double th3 = th2 * theta;
    const double h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
    const double h10 = th3 - 2.0 * th2 + theta;
    const double h01 = -2.0 * th3 + 3.0 * th2;
    const double h11 = th3 - th2;
    const Vec4 a = h00 * alpha_[n] + (h10 * dt_) * derivative_[n] + h01 * alpha_[n + 1] +
                   (h11 * dt_) * derivative_[n + 1];
    return DensityMatrix::from_propagated(core::unvectorize(to_rho(a, t)), Basis::Z);
}

Trajectory propagate_hybrid(const DensityMatrix& rho0, double t_end, const SystemParams& s, const BathParams& b,
                            const PropagatorConfig& c) {
    require_time(t_end);
    s.validate();
    b.validate();
    c.validate();
    Trajectory traj;
    traj.method = Method::HybridNumeric;
    traj.system = s;
    traj.bath = b;

    PropagatorConfig cfg = c;
    const double dt_nominal = c.resolve_dt(s, b);
    const auto n_steps =
        t_end == 0.0 ? std::size_t{0} : static_cast<std::size_t>(std::ceil(t_end / dt_nominal - 1e-9));
    if (n_steps > 0) {
        cfg.dt = t_end / static_cast<double>(n_steps);
    }
    HybridPropagator prop(rho0, s, b, cfg);
    const Basis measured = s.measured_basis();
    record(traj, 0.0, core::change_basis(prop.state_at_step(0), measured));
    for (std::size_t n = 1; n <= n_steps; ++n) {
        prop.step();
        if (n % cfg.output_stride == 0 || n == n_steps) {
            const double t = n == n_steps ? t_end : static_cast<double>(n) * prop.dt();
            record(traj, t, core::change_basis(prop.state_at_step(n), measured));
        }
    }
    traj.max_trace_drift = std::max(traj.max_trace_drift, prop.max_trace_drift());
    return traj;
}

SampledFunction::SampledFunction(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.empty() || times_.size() != values_.size()) {
        throw Error(ErrorCode::InvalidParameter, "sampled function needs matching, non-empty samples");
    }
}

double SampledFunction::operator()(double t) const {
    if (t <= times_.front()) {
        return values_.front();
    }
    if (t >= times_.back()) {
        return values_.back();
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto i = static_cast<std::size_t>(it - times_.begin());
    const double t0 = times_[i - 1];
    const double t1 = times_[i];
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * values_[i - 1] + w * values_[i];
}

SampledFunction coherence_modulus(const Trajectory& traj) {
    if (traj.samples.empty()) {
        throw Error(ErrorCode::InvalidParameter, "coherence_modulus needs a non-empty trajectory");
    }
    std::vector<double> ts;
    std::vector<double> vs;
    ts.reserve(traj.samples.size());
    vs.reserve(traj.samples.size());
    for (const auto& sample : traj.samples) {
        ts.push_back(sample.t);
        vs.push_back(sample.abs_rho12);
    }
    return SampledFunction(std::move(ts), std::move(vs));
}

} // namespace decotime::dynamics
