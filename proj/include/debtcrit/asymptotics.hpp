#pragma once

#include <cstdint>

#include "debtcrit/errors.hpp"
#include "debtcrit/parastat.hpp"
#include "debtcrit/quadrature.hpp"
#include "debtcrit/solve_config.hpp"

namespace debtcrit {

/// Which exponentially small terms the closed forms keep.
///   Leading: ln(k/kappa + 1) - e^{-B kappa}.
///   First:   additionally subtracts (1/2) e^{-2 B kappa}, the next term of the
///            geometric expansion of 1/(1 - e^{-B x}).
enum class CorrectionOrder { Leading, First };

/// Root of B = ln(k/kappa + 1) - e^{-B kappa} by fixed-point iteration from
/// ln(k/kappa + 1). The map is increasing in B, so the iterates fall
/// monotonically onto the largest root. When the equation has no real root
/// (small k/kappa) the leading value ln(k/kappa + 1) is returned.
/// Emits RegimeViolation whenever the result is below 1.
double solve_B(std::int64_t k, double kappa, const SolveConfig& cfg = {}, Warnings* warnings = nullptr,
               CorrectionOrder order = CorrectionOrder::Leading);

/// (1/b) [ln(k/kappa + 1) - e^{-B kappa}] with B from solve_B.
double sigma_asym(double b, double kappa, std::int64_t k, const SolveConfig& cfg = {}, Warnings* warnings = nullptr,
                  CorrectionOrder order = CorrectionOrder::Leading);

/// Simplified payoff (1/b) [(k + kappa + 1) B - k + kappa e^{-B kappa}].
double E_asym(double b, double kappa, std::int64_t k, const SolveConfig& cfg = {}, Warnings* warnings = nullptr);

/// Unsimplified payoff
/// (1/b) {(k + kappa + 1) [ln(k/kappa + 1) - e^{-B kappa}] - k + kappa e^{-B kappa}}.
/// Equal to E_asym whenever B solves the B-equation exactly.
double E_asym_unsimplified(double b, double kappa, std::int64_t k, const SolveConfig& cfg = {},
                           Warnings* warnings = nullptr);

/// Summand of the reduced sigma sum at continuous index x:
///   (1/b) (e^{B y} - B y - 1) / ((e^{B y} - 1) y),  y = x + kappa.
double reduced_sigma_term(double x, double b, double kappa, double B);

/// Direct sum of reduced_sigma_term over j = 1..k.
double reduced_sigma_sum(double b, double kappa, std::int64_t k, double B);

/// Euler-Maclaurin estimate of reduced_sigma_sum: quadrature over [1, k] plus
/// `order` endpoint corrections.
double reduced_sigma_integral(double b, double kappa, std::int64_t k, double B, int order,
                              const QuadratureOptions& opts = {});

struct AsymptoticResult {
    double sigma_asym = 0.0;
    double E_asym = 0.0;
    double B = 0.0;            // root of the B-equation
    double sigma_exact = 0.0;  // fixed point of the exact sum
    double E_exact = 0.0;
    double sigma_rel_dev = 0.0;  // |sigma_exact - sigma_asym| / sigma_exact
    double E_rel_dev = 0.0;
    Warnings warnings;
};

/// Closed forms side by side with the exact sums at the same (b, kappa, k).
AsymptoticResult compare_with_exact(const ParastatParams& p, const SolveConfig& cfg = {},
                                    CorrectionOrder order = CorrectionOrder::Leading);

}  // namespace debtcrit
