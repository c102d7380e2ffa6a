#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "debtcrit/errors.hpp"
#include "debtcrit/solve_config.hpp"

namespace debtcrit {

/// Proportionality factor between entropy and dE/dV in dimension 2.
inline const double kEntropyConstant = 2.0 * std::sqrt(6.0);

enum class Verdict { Solvent, Indeterminate, Bankrupt };

std::string_view to_string(Verdict v) noexcept;

/// S = 2 sqrt(6) [-k + k B^2 e^{-B} - e^{-B kappa} B^2 kappa^2].
/// V does not enter the closed form but must be positive. RegimeViolation when B < 1.
double entropy(double V, std::int64_t k, double B, double kappa, Warnings* warnings = nullptr);

/// Entropy-maximum critical debt V (ln k - 1/k). SmallK warning for k < 10.
double critical_sigma_entropy(std::int64_t k, double V, Warnings* warnings = nullptr);

/// Leading term V ln k of critical_sigma_entropy.
double critical_sigma_leading(std::int64_t k, double V);

struct ChempotSolution {
    double sigma0 = 0.0;
    double B0 = 0.0;  // sigma0 / V
    int iterations = 0;
};

/// Critical debt at vanishing chemical potential: the self-consistent root of
///   B0 = integral_1^k [1 - B0 x e^{-B0 x}] dx / x,   sigma0 = V B0,
/// iterated from B0 = ln k with the integral evaluated by quadrature.
ChempotSolution solve_critical_chempot(std::int64_t k, double V, const SolveConfig& cfg, Warnings* warnings = nullptr);

/// sigma0 of solve_critical_chempot.
double critical_sigma_chempot(std::int64_t k, double V, const SolveConfig& cfg, Warnings* warnings = nullptr);

struct AggregateCritical {
    double V = 0.0;
    double sigma0 = 0.0;
};

/// V = (E - k sigma)/k and sigma0 = V ln k. Throws NonPositiveVelocity when E <= k sigma.
AggregateCritical critical_from_aggregates(double E, double sigma, std::int64_t k);

/// Bankrupt above sigma0 (1 + rtol), Solvent below sigma0 (1 - rtol), Indeterminate between.
Verdict solvency_verdict(double sigma, double sigma0, double rtol = 0.01);

struct CriticalReport {
    double sigma0_entropy = 0.0;
    double sigma0_leading = 0.0;
    double sigma0_chempot = 0.0;
    double V = 0.0;
    double K_const = kEntropyConstant;
    double coincidence_gap = 0.0;  // |sigma0_entropy - sigma0_chempot| / V
    Verdict verdict = Verdict::Indeterminate;
    Warnings warnings;
};

/// Both critical-value methods at (k, V), their gap, and the verdict for `sigma`
/// against the entropy-method value.
CriticalReport critical_report(double sigma, std::int64_t k, double V, const SolveConfig& cfg, double rtol = 0.01);

// Critical-point diagnostics along a repayment trajectory.

struct TrajectoryState {
    double sigma = 0.0;
    double V = 0.0;
    std::int64_t k = 0;
    double kappa = 0.0;
};

/// Parameters at the critical point: kappa0 = 0 and ln k0 = sigma0 / V0.
struct CriticalPointState {
    std::int64_t k0 = 0;
    double kappa0 = 0.0;
    double V0 = 0.0;
    double sigma0 = 0.0;
};

struct DiagnosticsConfig {
    double kappa_tol = 1e-8;     // |kappa| at or below this counts as zero
    double velocity_tol = 1e-8;  // V at or below this counts as stopped circulation
    double critical_rtol = 1e-3;     // |ln k - sigma/V| <= critical_rtol * ln k marks a candidate
    std::size_t window = 3;      // trailing states checked for joint decrease
};

struct StateDiagnostics {
    std::optional<double> critical_residual;  // |ln k - sigma/V|, absent when V <= 0
    bool critical_candidate = false;      // kappa ~ 0 and the residual is within tolerance
};

struct CriticalDiagnostics {
    std::vector<StateDiagnostics> states;
    bool approaching_critical = false;  // kappa, V and 1/ln k strictly decrease over the window
    bool critical_reached = false;      // final kappa ~ 0 and V ~ 0
    std::optional<CriticalPointState> critical_point;
};

CriticalDiagnostics critical_point_diagnostics(std::span<const TrajectoryState> trajectory,
                                               const DiagnosticsConfig& cfg = {});

}  // namespace debtcrit
