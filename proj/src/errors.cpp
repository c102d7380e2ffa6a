#include "debtcrit/errors.hpp"

#include <utility>

namespace debtcrit {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::EmptyPortfolio: return "EmptyPortfolio";
        case ErrorKind::NonPositiveAmount: return "NonPositiveAmount";
        case ErrorKind::NonPositiveDuration: return "NonPositiveDuration";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
        case ErrorKind::NumericalOverflow: return "NumericalOverflow";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::NoRoot: return "NoRoot";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::InfeasibleAggregates: return "InfeasibleAggregates";
        case ErrorKind::NonPositiveVelocity: return "NonPositiveVelocity";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::EmptyTrajectory: return "EmptyTrajectory";
    }
    return "Unknown";
}

std::string_view to_string(WarningCode code) noexcept {
    switch (code) {
        case WarningCode::SmallK: return "SmallK";
        case WarningCode::RegimeViolation: return "RegimeViolation";
        case WarningCode::LowDominance: return "LowDominance";
        case WarningCode::FrozenSystem: return "FrozenSystem";
        case WarningCode::ModelStageFailed: return "ModelStageFailed";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error(message), kind_(kind), module_(std::move(module)) {}

NoConvergenceError::NoConvergenceError(std::string module, const std::string& message, double last_iterate,
                                       int iterations)
    : Error(ErrorKind::NoConvergence, std::move(module), message),
      last_iterate_(last_iterate),
      iterations_(iterations) {}

void warn(Warnings* sink, WarningCode code, std::string module, std::string message) {
    if (sink != nullptr) {
        sink->push_back(Warning{code, std::move(module), std::move(message)});
    }
}

}  // namespace debtcrit
