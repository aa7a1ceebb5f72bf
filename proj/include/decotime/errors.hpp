// errors.hpp — Error codes shared by every decotime module

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace decotime {

enum class ErrorCode {
    InvalidState,
    InvalidParameter,
    NonHermitianHamiltonian,
    NonFinite,
    NegativeFrequency,
    PoleOfGamma,
    QuadratureFailure,
    DegenerateOmega,
    WrongObservable,
    ZeroTemperatureUnsupported,
    RequiresZeroTemperature,
    RequiresZeroSplitting,
    StepSizeTooLarge,
    InvalidFraction,
    ZeroStrength,
    NoInitialCoherence,
    NoCrossingFound,
    ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace decotime
