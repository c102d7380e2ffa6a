#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "debtcrit/app/report.hpp"
#include "debtcrit/errors.hpp"
#include "debtcrit/solve_config.hpp"

namespace debtcrit::app {

enum class OutputFormat { Text, Json };

struct AnalysisConfig {
    double dimension = 2.0;
    double tol = 1e-10;
    int max_iter = 10000;
    double rtol_verdict = 0.01;
    int grid_resolution = 1;
    OutputFormat format = OutputFormat::Text;
    int jobs = 1;

    /// Throws InvalidArgument on non-positive tolerances or counts, or a
    /// dimension other than 2 or in [1, 2).
    void validate() const;
    SolveConfig solve_config() const;
};

/// Stable exit-code contract.
enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 2,
    kExitModel = 3,
    kExitSolver = 4,
};

int exit_code_for(ErrorKind kind) noexcept;

/// A finished command. `report` is null when the input could not be read at
/// all; otherwise it holds whatever stages completed, and a failed stage is
/// recorded in its warnings with code ModelStageFailed.
struct CommandResult {
    Json report;
    int exit_code = kExitOk;
    Warnings warnings;
    std::string error;  // empty on success
};

CommandResult run_analyze(const std::string& csv_path, const AnalysisConfig& cfg);

/// Each file independently, up to cfg.jobs at a time; results keep input order.
std::vector<CommandResult> run_analyze_batch(const std::vector<std::string>& csv_paths, const AnalysisConfig& cfg);

CommandResult run_critical(double E, double sigma, std::int64_t k, const AnalysisConfig& cfg);

struct FractionalArgs {
    std::optional<double> alpha;
    std::optional<double> d;
    std::optional<double> E;
    std::optional<double> V;
    std::optional<std::int64_t> k;  // enables the self-consistent quadrature value
    std::optional<double> sigma;    // enables the verdict
    std::optional<double> alpha_lo; // sweep range, inclusive
    std::optional<double> alpha_hi;
    double alpha_step = 0.05;
};

CommandResult run_fractional(const FractionalArgs& args, const AnalysisConfig& cfg);

struct MixArgs {
    std::int64_t m = 0;
    std::int64_t n = 0;
    double s1 = 0.0;
    double s2 = 0.0;
    double L1 = 0.0;
    double L2 = 0.0;
    std::optional<double> V;
};

CommandResult run_mix(const MixArgs& args, const AnalysisConfig& cfg);

/// Serialized report in the configured format, newline-terminated.
std::string render(const Json& report, OutputFormat format);

}  // namespace debtcrit::app
