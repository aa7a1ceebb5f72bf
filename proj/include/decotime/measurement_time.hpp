// measurement_time.hpp — Duration of a finite-time measurement: the first
// instant t_M at which |rho12(t_M)| = f |rho12(0)| in the measured basis, the
// closed-form bound -ln(f) / (2 lambda^2), and (lambda, eta) sweeps.

#pragma once

#include <complex>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decotime/dynamics.hpp"

namespace decotime::measurement {

using bath::BathParams;
using core::DensityMatrix;
using dynamics::Method;
using dynamics::PropagatorConfig;
using dynamics::SystemParams;
using numerics::QuadratureConfig;

/// -ln(f) / (2 lambda^2). Errors: InvalidFraction unless 0 < f < 1,
/// ZeroStrength for lambda <= 0.
double upper_bound(double lambda, double f);

/// Anything that yields rho12(t) in the measured basis.
class CoherenceModel {
public:
    virtual ~CoherenceModel() = default;
    virtual std::complex<double> coherence(double t) = 0;
    virtual Method method() const noexcept = 0;
};

enum class MethodSelector { Analytic, Lindblad, Hybrid, Auto };

std::string_view to_string(MethodSelector m) noexcept;
/// "analytic" | "lindblad" | "hybrid" | "auto"; nullopt otherwise.
std::optional<MethodSelector> parse_method_selector(std::string_view text);

/// Couplings above this are not treated as weak by MethodSelector::Auto.
inline constexpr double kWeakCouplingLimit = 0.1;

/// Analytic when the observable-specific preconditions hold (sigma_z: any
/// temperature; sigma_x: T = 0 and omega0 = 0) and eta <= kWeakCouplingLimit,
/// hybrid otherwise. Non-auto selectors map directly; Analytic fails with the
/// analytic route's precondition error when it does not apply.
Method resolve_method(MethodSelector selector, const SystemParams& s, const BathParams& b);

struct ModelOptions {
    QuadratureConfig quadrature{};
    PropagatorConfig propagator{};
};

std::unique_ptr<CoherenceModel> make_model(Method method, const DensityMatrix& rho0, const SystemParams& s,
                                           const BathParams& b, const ModelOptions& options = {});

enum class Criterion {
    Modulus,        // |rho12(t)| / |rho12(0)|
    ImaginaryRatio, // Im rho12(t) / Im rho12(0), for states with Re rho12(0) = 0
};

struct ThresholdConfig {
    double f{0.3};
    std::optional<double> bracket_step; // default upper_bound / 20
    double root_rel_tol{1e-10};
    Criterion criterion{Criterion::Modulus};

    void validate() const;
};

struct MeasurementTimeResult {
    double t_m{0.0};
    double upper_bound{0.0};
    double f{0.0};
    Method method{Method::LindbladOnly};
    int iterations{0};
    int evaluations{0};
    double residual{0.0}; // ratio(t_M) - f
};

/// Forward bracket marching from t = 0, then bisection inside the first
/// bracket where the ratio drops to f. Errors: NoInitialCoherence,
/// NoCrossingFound (nothing before 20 * upper_bound).
MeasurementTimeResult measurement_time(CoherenceModel& model, const SystemParams& s, const ThresholdConfig& c);

/// Convenience: builds the model for `method` and extracts t_M.
MeasurementTimeResult measurement_time(Method method, const DensityMatrix& rho0, const SystemParams& s,
                                       const BathParams& b, const ThresholdConfig& c,
                                       const ModelOptions& options = {});

struct SweepSpec {
    std::vector<double> lambdas;
    std::vector<double> etas;
    double f{0.3};
    dynamics::Observable observable{dynamics::Observable::SigmaX};
    double omega0{0.0};
    double omega_c{1.0};
    bath::InverseTemperature temperature{bath::InverseTemperature::zero_temperature()};
    MethodSelector method{MethodSelector::Auto};
    // (|+> - e^{i pi/4}|->)/sqrt2, purely imaginary coherence in the X basis
    DensityMatrix initial{core::superposition_state(1.25 * std::numbers::pi)};
    bool include_baseline{false}; // prepend an eta = 0 row set
    Criterion criterion{Criterion::Modulus};
    ModelOptions options{};

    void validate() const;
};

struct SweepRow {
    double lambda{0.0};
    double eta{0.0};
    double upper_bound{0.0};
    std::optional<MeasurementTimeResult> result;
    std::string status; // "ok" or an error code name
};

/// One row per (eta, lambda) cell, ordered by eta then lambda. Cells run on
/// `jobs` worker threads (0 = hardware concurrency); failures are recorded per
/// cell and never abort the sweep.
std::vector<SweepRow> sweep(const SweepSpec& spec, unsigned jobs = 0);

} // namespace decotime::measurement
