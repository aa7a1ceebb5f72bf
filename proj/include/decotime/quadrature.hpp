// quadrature.hpp — Adaptive Gauss-Kronrod integration on finite intervals,
// plus a half-period panel integrator for oscillatory integrands.

#pragma once

#include <functional>
#include <vector>

namespace decotime::numerics {

struct QuadratureConfig {
    double abs_tol{1e-10};
    double rel_tol{1e-8};
    double cutoff_multiplier{50.0}; // frequency integrals run over [0, W * omega_c]
    int max_subdivisions{2000};

    /// Throws InvalidParameter when tolerances are not positive or W < 10.
    void validate() const;

    /// Applies DECOTIME_QUAD_TOL (absolute tolerance) when it is set.
    static QuadratureConfig from_environment(QuadratureConfig base);
    static QuadratureConfig from_environment();
};

struct QuadResult {
    double value{0.0};
    double abs_error{0.0};
    int evaluations{0};
    int intervals{0};
};

using Integrand = std::function<double(double)>;

/// One 21-point Kronrod panel with the embedded 10-point Gauss error estimate.
QuadResult gauss_kronrod21(const Integrand& f, double a, double b);

/// Globally adaptive bisection; stops when the summed error estimate is
/// below max(abs_tol, rel_tol * |I|). Throws QuadratureFailure when the
/// subdivision budget runs out or the integrand turns non-finite.
QuadResult integrate_adaptive(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                              int max_subdivisions);

QuadResult integrate_adaptive(const Integrand& f, double a, double b, const QuadratureConfig& cfg);

/// Integrates panel by panel, each panel one half-period long, and feeds the
/// partial sums to a Wynn epsilon extrapolation. Stops early once the
/// extrapolated limit is stable; otherwise sums every panel up to b.
QuadResult integrate_oscillatory(const Integrand& f, double a, double b, double half_period,
                                 const QuadratureConfig& cfg);

/// Wynn epsilon table over a stream of partial sums.
class WynnEpsilon {
public:
    explicit WynnEpsilon(std::size_t max_depth = 12) : max_depth_(max_depth) {}

    /// Adds the next partial sum and returns the current best limit estimate.
    double add(double partial_sum);
    std::size_t size() const noexcept { return count_; }

private:
    std::size_t max_depth_;
    std::size_t count_{0};
    std::vector<double> diag_;
};

} // namespace decotime::numerics
