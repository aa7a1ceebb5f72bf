// special.hpp — Complex log-Gamma.

#pragma once

#include <complex>

namespace decotime::numerics {

/// Principal-branch log Gamma(z): the real part is ln|Gamma(z)| and the
/// imaginary part is arg Gamma(z) reduced to (-pi, pi], so exp() of the result
/// reproduces Gamma(z). Lanczos (g = 7, 9 terms) for Re z >= 1/2, reflection
/// below. Throws PoleOfGamma at z = 0, -1, -2, ...
std::complex<double> log_gamma_complex(std::complex<double> z);

} // namespace decotime::numerics
