// scenario.hpp — Scenario configs for the command-line front end.
//
// Flat line format, one `section.key = value` per line, `#` starts a comment:
//
//   system.omega0 = 0
//   system.lambda = 1
//   system.observable = sigma_x        # sigma_z | sigma_x
//   bath.eta = 0.05
//   bath.omega_c = 1
//   bath.beta = zero-temperature       # or a positive number
//   initial.rho11 = 0.5
//   initial.re_rho12 = -0.35355339059327373
//   initial.im_rho12 = 0.35355339059327373
//   initial.basis = z                  # z | x
//   threshold.f = 0.3                  # required
//   threshold.criterion = modulus      # modulus | imaginary-ratio
//   run.method = auto                  # analytic | lindblad | hybrid | auto
//   time.t_end = 1.5
//   time.samples = 151
//   output.format = csv                # csv | json
//   output.path = out.csv              # optional
//   propagator.dt = 0.001              # optional
//   sweep.lambdas = 0.5, 1, 2          # optional sweep block
//   sweep.etas = 0.05, 1, 5
//   sweep.baseline = false
//
// emit() writes every field in this order with numbers at 17 significant
// digits, so parse(emit(c)) == c and emit(parse(text)) is the normal form.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decotime/measurement_time.hpp"

namespace decotime::cli {

enum class OutputFormat { Csv, Json };

struct SweepAxes {
    std::vector<double> lambdas;
    std::vector<double> etas;
    bool baseline{false};

    bool operator==(const SweepAxes&) const = default;
};

struct ScenarioConfig {
    dynamics::SystemParams system{};
    bath::BathParams bath{};
    double rho11{0.5};
    double re_rho12{0.0};
    double im_rho12{0.0};
    core::Basis basis{core::Basis::Z};
    double f{0.3};
    measurement::Criterion criterion{measurement::Criterion::Modulus};
    measurement::MethodSelector method{measurement::MethodSelector::Auto};
    double t_end{1.0};
    std::size_t samples{101};
    OutputFormat format{OutputFormat::Csv};
    std::optional<std::string> output_path;
    std::optional<double> dt;
    std::optional<SweepAxes> sweep;

    /// Component invariants, reported as ConfigError with the field path.
    void validate() const;

    core::DensityMatrix initial_state() const;
    measurement::ThresholdConfig threshold() const;
    measurement::ModelOptions model_options() const;
    /// Throws ConfigError naming "sweep" when no sweep block is present.
    measurement::SweepSpec sweep_spec() const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ConfigError with "line N" or the field path on malformed input,
/// unknown keys, duplicates or missing required keys; validates the result.
ScenarioConfig parse_config(std::string_view text);
std::string emit_config(const ScenarioConfig& c);

/// %.17g
std::string format_number(double v);

} // namespace decotime::cli
