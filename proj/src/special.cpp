#include "decotime/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "decotime/errors.hpp"

namespace decotime::numerics {

namespace {

using cplx = std::complex<double>;

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double wrap_phase(double phi) {
    phi = std::remainder(phi, 2.0 * std::numbers::pi);
    if (phi <= -std::numbers::pi) {
        phi += 2.0 * std::numbers::pi;
    }
    return phi;
}

// log Gamma(z) for Re z >= 1/2, on some branch (phase not yet reduced).
cplx lanczos_log_gamma(cplx z) {
    const cplx zm = z - 1.0;
    cplx series = kLanczos[0];
    for (int i = 1; i < 9; ++i) {
        series += kLanczos[i] / (zm + static_cast<double>(i));
    }
    const cplx t = zm + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (zm + 0.5) * std::log(t) - t + std::log(series);
}

// log sin(pi z) on some branch, without overflow for large |Im z|.
cplx log_sin_pi(cplx z) {
    const cplx w = std::numbers::pi * z;
    const cplx i{0.0, 1.0};
    if (std::abs(w.imag()) < 20.0) {
        return std::log(std::sin(w));
    }
    if (w.imag() > 0.0) {
        return -i * w + std::log((std::exp(2.0 * i * w) - 1.0) / (2.0 * i));
    }
    return i * w + std::log((1.0 - std::exp(-2.0 * i * w)) / (2.0 * i));
}

} // namespace

std::complex<double> log_gamma_complex(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::InvalidParameter, "log_gamma_complex: non-finite argument");
    }
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
        throw Error(ErrorCode::PoleOfGamma, "Gamma has a pole at z = " + std::to_string(z.real()));
    }
    cplx v;
    if (z.real() >= 0.5) {
        v = lanczos_log_gamma(z);
    } else {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        v = std::log(std::numbers::pi) - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
    }
    return {v.real(), wrap_phase(v.imag())};
}

} // namespace decotime::numerics
