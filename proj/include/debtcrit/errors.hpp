#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace debtcrit {

enum class ErrorKind {
    EmptyPortfolio,
    NonPositiveAmount,
    NonPositiveDuration,
    ParseError,
    InvalidArgument,
    Io,
    NumericalOverflow,
    NoConvergence,
    NoRoot,
    QuadratureFailure,
    InfeasibleAggregates,
    NonPositiveVelocity,
    DomainError,
    EmptyTrajectory,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `module()` names the component that
/// raised it so the CLI can report provenance.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

/// Iterative solver ran out of budget; carries the last iterate.
class NoConvergenceError : public Error {
public:
    NoConvergenceError(std::string module, const std::string& message, double last_iterate, int iterations);

    double last_iterate() const noexcept { return last_iterate_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_iterate_;
    int iterations_;
};

enum class WarningCode {
    SmallK,
    RegimeViolation,
    LowDominance,
    FrozenSystem,
    ModelStageFailed,
};

std::string_view to_string(WarningCode code) noexcept;

struct Warning {
    WarningCode code;
    std::string module;
    std::string message;

    bool operator==(const Warning&) const = default;
};

using Warnings = std::vector<Warning>;

/// Appends to `sink` when one was supplied; a null sink discards.
void warn(Warnings* sink, WarningCode code, std::string module, std::string message);

}  // namespace debtcrit
