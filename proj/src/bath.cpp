#include "decotime/bath.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "decotime/errors.hpp"
#include "decotime/special.hpp"

namespace decotime::bath {

namespace {

using cplx = std::complex<double>;

// Above this t * omega_c the frequency integrand oscillates too much for a
// single adaptive pass and is integrated per half period instead.
constexpr double kOscillatoryThreshold = 30.0;

QuadResult frequency_integral(const numerics::Integrand& f, double t, const BathParams& p,
                              const QuadratureConfig& q) {
    q.validate();
    const double upper = q.cutoff_multiplier * p.omega_c;
    if (t * p.omega_c > kOscillatoryThreshold) {
        return numerics::integrate_oscillatory(f, 0.0, upper, std::numbers::pi / t, q);
    }
    return numerics::integrate_adaptive(f, 0.0, upper, q);
}

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw Error(ErrorCode::InvalidParameter, "time must be finite and non-negative");
    }
}

void require_omega(double omega_rate) {
    if (!(omega_rate > 0.0)) {
        throw Error(ErrorCode::DegenerateOmega, "Omega must be positive (g0 diverges logarithmically at Omega = 0)");
    }
}

// (e^{z t} - 1) / z with z = s + i w, accurate for small |z t|.
cplx growth_integral(double s, double w, double t) {
    const cplx z{s, w};
    const cplx zt = z * t;
    if (std::abs(zt) < 1e-5) {
        return t * (1.0 + zt / 2.0 + zt * zt / 6.0);
    }
    const double a = zt.real();
    const double b = zt.imag();
    const double sb = std::sin(0.5 * b);
    const cplx em1{std::expm1(a) * std::cos(b) - 2.0 * sb * sb, std::exp(a) * std::sin(b)};
    return em1 / z;
}

enum class Kernel { G1, G2 };

double growth_weighted(Kernel kernel, double t, double rate, const BathParams& p, double omega_rate,
                       const QuadratureConfig& q) {
    require_time(t);
    p.validate();
    require_omega(omega_rate);
    if (t == 0.0) {
        return 0.0;
    }
    if (rate * t > 700.0) {
        throw Error(ErrorCode::NonFinite, "exp(2 lambda^2 t) overflows; bound t");
    }
    const double four_om2 = 4.0 * omega_rate * omega_rate;
    const double wc = p.omega_c;
    if (kernel == Kernel::G1) {
        auto f = [&](double w) {
            return w / (four_om2 + w * w) * std::exp(-w / wc) * growth_integral(rate, w, t).real();
        };
        return 2.0 * frequency_integral(f, t, p, q).value;
    }
    auto f = [&](double w) {
        return w * w / (four_om2 + w * w) * std::exp(-w / wc) * growth_integral(rate, w, t).imag();
    };
    return frequency_integral(f, t, p, q).value / omega_rate;
}

double measurement_rate(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::InvalidParameter, "lambda must be positive");
    }
    return 2.0 * lambda * lambda;
}

} // namespace

InverseTemperature InverseTemperature::finite(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorCode::InvalidParameter, "beta must be positive and finite (use zero_temperature())");
    }
    InverseTemperature it;
    it.zero_temperature_ = false;
    it.beta_ = beta;
    return it;
}

double InverseTemperature::coth_half(double omega) const {
    if (zero_temperature_) {
        return 1.0;
    }
    return 1.0 / std::tanh(0.5 * beta_ * omega);
}

void BathParams::validate() const {
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw Error(ErrorCode::InvalidParameter, "eta must be >= 0");
    }
    if (!(omega_c > 0.0) || !std::isfinite(omega_c)) {
        throw Error(ErrorCode::InvalidParameter, "omega_c must be > 0");
    }
}

double ohmic_j(double omega, const BathParams& p) {
    if (omega < 0.0) {
        throw Error(ErrorCode::NegativeFrequency, "spectral density needs omega >= 0");
    }
    return p.eta * omega * std::exp(-omega / p.omega_c);
}

QuadResult decoherence_exponent_z_estimate(double t, const BathParams& p, const QuadratureConfig& q) {
    require_time(t);
    p.validate();
    if (t == 0.0 || p.eta == 0.0) {
        return {};
    }
    const auto& temp = p.temperature;
    const double wc = p.omega_c;
    auto f = [&](double w) {
        if (w == 0.0) {
            // (1 - cos wt)/w * coth(beta w/2) -> t^2/beta
            return temp.is_zero_temperature() ? 0.0 : t * t / temp.beta();
        }
        const double s = std::sin(0.5 * w * t);
        return std::exp(-w / wc) * temp.coth_half(w) * 2.0 * s * s / w;
    };
    QuadResult r = frequency_integral(f, t, p, q);
    r.value *= -4.0 * p.eta;
    r.abs_error *= 4.0 * p.eta;
    return r;
}

double decoherence_exponent_z(double t, const BathParams& p, const QuadratureConfig& q) {
    return decoherence_exponent_z_estimate(t, p, q).value;
}

double gamma_decoherence_factor(double t, const BathParams& p) {
    require_time(t);
    p.validate();
    if (p.temperature.is_zero_temperature()) {
        throw Error(ErrorCode::ZeroTemperatureUnsupported, "Gamma closed form needs a finite temperature");
    }
    const double beta = p.temperature.beta();
    const double x = 1.0 / (p.omega_c * beta);
    const double y = t / beta;
    using numerics::log_gamma_complex;
    const double log_ratio = 2.0 * log_gamma_complex({x, y}).real() - 2.0 * log_gamma_complex({x, 0.0}).real() +
                             2.0 * log_gamma_complex({x + 1.0, y}).real() -
                             2.0 * log_gamma_complex({x + 1.0, 0.0}).real();
    return std::exp(2.0 * p.eta * log_ratio);
}

std::complex<double> bath_correlation(double t, const BathParams& p, const QuadratureConfig& q) {
    require_time(t);
    p.validate();
    if (p.eta == 0.0) {
        return {0.0, 0.0};
    }
    // the returned value must hold abs_tol as a true error, not an estimate: split the budget between
    // the two components, keep a margin of 10 for GK estimates that undershoot on oscillatory panels,
    // and stop the relative term from loosening it where |C| is of order one
    QuadratureConfig half = q;
    half.abs_tol = 0.05 * q.abs_tol;
    half.rel_tol = std::min(q.rel_tol, 1e-10);
    const auto& temp = p.temperature;
    auto re = [&](double w) {
        if (w == 0.0) {
            // w coth(beta w/2) -> 2/beta
            return temp.is_zero_temperature() ? 0.0 : p.eta * 2.0 / temp.beta();
        }
        return ohmic_j(w, p) * temp.coth_half(w) * std::cos(w * t);
    };
    const double real_part = frequency_integral(re, t, p, half).value;
    double imag_part = 0.0;
    if (t > 0.0) {
        auto im = [&](double w) { return -ohmic_j(w, p) * std::sin(w * t); };
        imag_part = frequency_integral(im, t, p, half).value;
    }
    return {real_part, imag_part};
}

QuadResult g0_estimate(const BathParams& p, double omega_rate, const QuadratureConfig& q) {
    p.validate();
    require_omega(omega_rate);
    const double four_om2 = 4.0 * omega_rate * omega_rate;
    const double wc = p.omega_c;
    auto f = [&](double w) { return w / (four_om2 + w * w) * std::exp(-w / wc); };
    return frequency_integral(f, 0.0, p, q);
}

double g0(const BathParams& p, double omega_rate, const QuadratureConfig& q) {
    return g0_estimate(p, omega_rate, q).value;
}

double g1(double t, const BathParams& p, double omega_rate, const QuadratureConfig& q) {
    require_time(t);
    p.validate();
    require_omega(omega_rate);
    const double four_om2 = 4.0 * omega_rate * omega_rate;
    const double wc = p.omega_c;
    auto f = [&](double w) { return w / (four_om2 + w * w) * std::exp(-w / wc) * std::cos(w * t); };
    return 2.0 * frequency_integral(f, t, p, q).value;
}

double g2(double t, const BathParams& p, double omega_rate, const QuadratureConfig& q) {
    require_time(t);
    p.validate();
    require_omega(omega_rate);
    if (t == 0.0) {
        return 0.0;
    }
    const double four_om2 = 4.0 * omega_rate * omega_rate;
    const double wc = p.omega_c;
    auto f = [&](double w) { return w * w / (four_om2 + w * w) * std::exp(-w / wc) * std::sin(w * t); };
    return frequency_integral(f, t, p, q).value / omega_rate;
}

double a_plus(double t, double lambda, const BathParams& p, double omega_rate, const QuadratureConfig& q) {
    return growth_weighted(Kernel::G1, t, measurement_rate(lambda), p, omega_rate, q);
}

double a_minus(double t, double lambda, const BathParams& p, double omega_rate, const QuadratureConfig& q) {
    return growth_weighted(Kernel::G1, t, -measurement_rate(lambda), p, omega_rate, q);
}

double b_plus(double t, double lambda, const BathParams& p, double omega_rate, const QuadratureConfig& q) {
    return growth_weighted(Kernel::G2, t, measurement_rate(lambda), p, omega_rate, q);
}

double b_minus(double t, double lambda, const BathParams& p, double omega_rate, const QuadratureConfig& q) {
    return growth_weighted(Kernel::G2, t, -measurement_rate(lambda), p, omega_rate, q);
}

} // namespace decotime::bath
