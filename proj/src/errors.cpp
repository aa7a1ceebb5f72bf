#include "decotime/errors.hpp"

namespace decotime {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::NonHermitianHamiltonian: return "NonHermitianHamiltonian";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::NegativeFrequency: return "NegativeFrequency";
        case ErrorCode::PoleOfGamma: return "PoleOfGamma";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::DegenerateOmega: return "DegenerateOmega";
        case ErrorCode::WrongObservable: return "WrongObservable";
        case ErrorCode::ZeroTemperatureUnsupported: return "ZeroTemperatureUnsupported";
        case ErrorCode::RequiresZeroTemperature: return "RequiresZeroTemperature";
        case ErrorCode::RequiresZeroSplitting: return "RequiresZeroSplitting";
        case ErrorCode::StepSizeTooLarge: return "StepSizeTooLarge";
        case ErrorCode::InvalidFraction: return "InvalidFraction";
        case ErrorCode::ZeroStrength: return "ZeroStrength";
        case ErrorCode::NoInitialCoherence: return "NoInitialCoherence";
        case ErrorCode::NoCrossingFound: return "NoCrossingFound";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

} // namespace decotime
