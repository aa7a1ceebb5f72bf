// dynamics.hpp — Reduced qubit dynamics under a Lindblad measurement
// (L = lambda sigma_alpha) plus sigma_z phase noise from an Ohmic bath.
//
// Four routes to rho(t):
//   analytic_z          closed-form weak-coupling solution, sigma_z measured
//   analytic_x          closed-form weak-coupling solution, sigma_x measured,
//                       zero temperature and omega0 = 0 only
//   propagate_lindblad  exact semigroup evolution without the bath (eta = 0)
//   propagate_hybrid    numerical integration of the projected second-order
//                       hybrid equation, any eta
//
// The hybrid equation is integrated in the picture alpha(t) = exp(-S t) rho(t),
// where S is the system generator (Hamiltonian + measurement). With
// D(t) = exp(-S t)[sigma_z, .]exp(S t) and A(t) = exp(-S t){sigma_z, .}exp(S t):
//
//   d alpha/dt = R(t) alpha,
//   R(t) = -int_0^t dt' D(t) [Re C(t-t') D(t') + i Im C(t-t') A(t')]
//
// and rho(t) = exp(S t) alpha(t).

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "decotime/bath.hpp"
#include "decotime/quantum_core.hpp"

namespace decotime::dynamics {

using bath::BathParams;
using core::DensityMatrix;
using numerics::QuadratureConfig;

enum class Observable { SigmaZ, SigmaX };
enum class Method { AnalyticZ, AnalyticX, LindbladOnly, HybridNumeric };

std::string_view to_string(Observable o) noexcept;
std::string_view to_string(Method m) noexcept;

struct SystemParams {
    double omega0{0.0};
    double lambda{1.0};
    Observable observable{Observable::SigmaZ};

    /// Throws ZeroStrength for lambda <= 0, InvalidParameter for omega0 < 0.
    void validate() const;

    /// Omega = sqrt(lambda^4 - 4 omega0^2). Throws DegenerateOmega when the
    /// radicand is negative.
    double omega_rate() const;

    core::Operator2 hamiltonian() const;       // omega0 sigma_z
    core::Operator2 lindblad_operator() const; // lambda sigma_alpha
    core::Superoperator system_generator() const;
    core::Basis measured_basis() const;

    bool operator==(const SystemParams&) const = default;
};

struct TrajectorySample {
    double t;
    DensityMatrix rho; // in the measured basis
    double abs_rho12;
};

struct Trajectory {
    Method method{Method::LindbladOnly};
    SystemParams system;
    std::optional<BathParams> bath;
    std::vector<TrajectorySample> samples;

    double max_trace_drift{0.0};
    double min_positivity_margin{0.0};
    std::size_t positivity_violations{0}; // samples with margin < -1e-8
};

enum class DecoherenceSource {
    GammaClosedForm, // finite temperature only
    Quadrature,      // frequency quadrature; also valid at zero temperature
};

/// Weak-coupling solution for L = lambda sigma_z. Populations are constant and
///   rho12(t) = rho12(0) * D(t) * exp(-2 lambda^2 t) * exp(-2 i omega0 t)
/// with D the bath decoherence factor; the phase sign follows -i[H, rho], so
/// rho21 carries exp(+2 i omega0 t). Result is in the Z basis.
/// Errors: WrongObservable, ZeroTemperatureUnsupported (Gamma source at T = 0).
DensityMatrix analytic_z(const DensityMatrix& rho0, double t, const SystemParams& s, const BathParams& b,
                         DecoherenceSource source = DecoherenceSource::GammaClosedForm,
                         const QuadratureConfig& q = {});

/// Weak-coupling solution for L = lambda sigma_x at T = 0, omega0 = 0. The
/// initial state is read in the Z basis; the result is in the X basis.
/// Errors: WrongObservable, RequiresZeroTemperature, RequiresZeroSplitting.
DensityMatrix analytic_x(const DensityMatrix& rho0, double t, const SystemParams& s, const BathParams& b,
                         const QuadratureConfig& q = {});

/// Uniform time grid with `samples` points on [0, t_end] (one point if t_end = 0).
std::vector<double> uniform_times(double t_end, std::size_t samples);

/// Samples an analytic route on a uniform grid; AnalyticZ or AnalyticX.
Trajectory analytic_trajectory(const DensityMatrix& rho0, double t_end, std::size_t samples, const SystemParams& s,
                               const BathParams& b, const QuadratureConfig& q = {});

/// Exact bath-free evolution exp(K t) rho0.
Trajectory propagate_lindblad(const DensityMatrix& rho0, double t_end, const SystemParams& s,
                              std::size_t samples = 101);

struct PropagatorConfig {
    std::optional<double> dt; // default: see default_dt()
    std::size_t output_stride{1};
    QuadratureConfig quadrature{};

    void validate() const;
    /// min(1e-3 / lambda^2, 1e-3 beta), with 1e-3 / omega_c replacing 1e-3 beta at T = 0.
    static double default_dt(const SystemParams& s, const BathParams& b);
    double resolve_dt(const SystemParams& s, const BathParams& b) const;
};

/// Fourth-order Runge-Kutta integrator of the hybrid equation on a fixed step.
/// The memory integral R(t) is evaluated by composite Simpson on the half-step
/// lattice, with bath correlations and picture-transformed sigma_z
/// superoperators cached per lattice node. States between steps come from
/// cubic Hermite interpolation of alpha.
class HybridPropagator {
public:
    HybridPropagator(const DensityMatrix& rho0, const SystemParams& s, const BathParams& b,
                     const PropagatorConfig& c = {});

    double dt() const noexcept { return dt_; }
    double time() const noexcept { return static_cast<double>(steps()) * dt_; }
    std::size_t steps() const noexcept { return alpha_.size() - 1; }

    void step();
    void advance_to(double t);

    /// Z-basis state after `n` steps (n <= steps()).
    DensityMatrix state_at_step(std::size_t n) const;
    /// Z-basis state at any t >= 0; advances the integration when needed.
    DensityMatrix state_at(double t);

    double max_trace_drift() const noexcept { return max_trace_drift_; }

    /// Memory generator R at lattice time m * dt / 2 (exposed for tests).
    const core::Superoperator& memory_generator(std::size_t m);

private:
    void extend_lattice(std::size_t m);
    core::Vec4 to_rho(const core::Vec4& alpha, double t) const;

    SystemParams system_;
    BathParams bath_;
    PropagatorConfig config_;
    double dt_;
    double half_;

    core::Superoperator generator_;
    core::Superoperator commutator_;     // X -> [sigma_z, X]
    core::Superoperator anticommutator_; // X -> {sigma_z, X}

    std::vector<std::complex<double>> correlation_; // C(j h)
    std::vector<core::Superoperator> commutator_pic_;
    std::vector<core::Superoperator> anticommutator_pic_;
    std::vector<std::optional<core::Superoperator>> memory_;

    std::vector<core::Vec4> alpha_;
    std::vector<core::Vec4> derivative_;
    double max_trace_drift_{0.0};
};

/// Numerical integration of the hybrid equation on [0, t_end], sampled every
/// `output_stride` steps and at t_end. Errors: StepSizeTooLarge when the trace
/// drifts by more than 1e-6, NonFinite when picture factors overflow.
Trajectory propagate_hybrid(const DensityMatrix& rho0, double t_end, const SystemParams& s, const BathParams& b,
                            const PropagatorConfig& c = {});

/// Piecewise-linear function through (t_k, v_k).
class SampledFunction {
public:
    SampledFunction(std::vector<double> times, std::vector<double> values);

    double operator()(double t) const;
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

/// |rho12| of every sample, linearly interpolated. Throws InvalidParameter on
/// an empty trajectory.
SampledFunction coherence_modulus(const Trajectory& traj);

} // namespace decotime::dynamics
