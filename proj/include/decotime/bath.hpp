// bath.hpp — Ohmic bosonic environment: spectral density, thermal
// correlation function, the sigma_z dephasing exponent and its Gamma-function
// closed form, and the spectral integrals of the sigma_x solution.
//
// Units: hbar = k_B = 1. The bath enters only through
//   J(w) = eta * w * exp(-w / omega_c)
// and the thermal factor coth(beta w / 2). Zero temperature is a distinct
// state, never a large finite beta.

#pragma once

#include <complex>

#include "decotime/quadrature.hpp"

namespace decotime::bath {

using numerics::QuadratureConfig;
using numerics::QuadResult;

class InverseTemperature {
public:
    static InverseTemperature zero_temperature() { return InverseTemperature(); }
    /// Throws InvalidParameter unless 0 < beta < inf.
    static InverseTemperature finite(double beta);

    bool is_zero_temperature() const noexcept { return zero_temperature_; }
    /// Only meaningful when !is_zero_temperature().
    double beta() const noexcept { return beta_; }

    /// coth(beta w / 2); exactly 1 at zero temperature.
    double coth_half(double omega) const;

    bool operator==(const InverseTemperature&) const = default;

private:
    InverseTemperature() = default;
    bool zero_temperature_{true};
    double beta_{0.0};
};

struct BathParams {
    double eta{0.0};
    double omega_c{1.0};
    InverseTemperature temperature{InverseTemperature::zero_temperature()};

    /// Throws InvalidParameter when eta < 0 or omega_c <= 0.
    void validate() const;

    bool operator==(const BathParams&) const = default;
};

/// eta * w * exp(-w / omega_c). Throws NegativeFrequency for w < 0.
double ohmic_j(double omega, const BathParams& p);

/// -4 eta int_0^inf dw e^{-w/wc} coth(beta w/2) (1 - cos wt) / w, i.e. the
/// sigma_z dephasing exponent after the inner time integral is done in closed
/// form. Non-positive, zero at t = 0. Zero temperature uses coth -> 1.
double decoherence_exponent_z(double t, const BathParams& p, const QuadratureConfig& q = {});
QuadResult decoherence_exponent_z_estimate(double t, const BathParams& p, const QuadratureConfig& q = {});

/// [ Gamma(x+iy)Gamma(x-iy)/Gamma(x)^2 * Gamma(x+1+iy)Gamma(x+1-iy)/Gamma(x+1)^2 ]^(2 eta)
/// with x = 1/(omega_c beta), y = t/beta. Requires finite temperature
/// (ZeroTemperatureUnsupported otherwise).
double gamma_decoherence_factor(double t, const BathParams& p);

/// C(t) = int_0^inf dw J(w) [coth(beta w/2) cos wt - i sin wt].
std::complex<double> bath_correlation(double t, const BathParams& p, const QuadratureConfig& q = {});

/// g0 = int_0^inf dw w/(4 Omega^2 + w^2) e^{-w/wc}. Throws DegenerateOmega for Omega <= 0.
double g0(const BathParams& p, double omega_rate, const QuadratureConfig& q = {});
/// g1(t) = 2 int_0^inf dw w/(4 Omega^2 + w^2) e^{-w/wc} cos wt
double g1(double t, const BathParams& p, double omega_rate, const QuadratureConfig& q = {});
/// g2(t) = (1/Omega) int_0^inf dw w^2/(4 Omega^2 + w^2) e^{-w/wc} sin wt
double g2(double t, const BathParams& p, double omega_rate, const QuadratureConfig& q = {});

QuadResult g0_estimate(const BathParams& p, double omega_rate, const QuadratureConfig& q = {});

/// A+-(t) = int_0^t e^{+-2 lambda^2 t'} g1(t') dt',
/// B+-(t) = int_0^t e^{+-2 lambda^2 t'} g2(t') dt'.
/// The t' integral is carried out analytically under the frequency integral.
double a_plus(double t, double lambda, const BathParams& p, double omega_rate, const QuadratureConfig& q = {});
double a_minus(double t, double lambda, const BathParams& p, double omega_rate, const QuadratureConfig& q = {});
double b_plus(double t, double lambda, const BathParams& p, double omega_rate, const QuadratureConfig& q = {});
double b_minus(double t, double lambda, const BathParams& p, double omega_rate, const QuadratureConfig& q = {});

} // namespace decotime::bath
