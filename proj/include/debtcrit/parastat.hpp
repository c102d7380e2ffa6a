#pragma once

#include <cstdint>

#include "debtcrit/errors.hpp"
#include "debtcrit/solve_config.hpp"

namespace debtcrit {

/// Parameters of the exact d = 2 parastatistic sums.
struct ParastatParams {
    double b = 0.0;      // inverse velocity of money circulation, V = 1/b
    double kappa = 0.0;  // chemical-potential parameter (opposite sign)
    std::int64_t k = 0;  // number of debts / creditors

    double velocity() const noexcept { return 1.0 / b; }
    double B(double sigma) const noexcept { return b * sigma; }

    void validate(const char* module) const;
};

/// Exponential arguments above this short-circuit the Bose factor to zero.
inline constexpr double kExpCutoff = 700.0;

/// Right-hand side of the self-consistent sigma equation:
///   sum_j [ 1/(e^{b(j+kappa)} - 1) - sigma/(e^{b sigma (j+kappa)} - 1) ].
/// Terms are accumulated in ascending j with compensated summation.
double sigma_rhs(double sigma, const ParastatParams& p);

/// sum_j j * [ ... ], the duration-weighted companion of sigma_rhs.
double e1_exact(double sigma, const ParastatParams& p);

/// (k + 1) sigma - e1_exact(sigma).
double payoff_exact(double sigma, const ParastatParams& p);

/// Pure Bose sum sum_j 1/(e^{b(j+kappa)} - 1); an upper bound on every fixed point.
double bose_sum(const ParastatParams& p);

/// sigma_rhs with every term scaled by alpha * j^(alpha - 1). alpha = 1
/// reproduces sigma_rhs bit for bit.
double weighted_sigma_rhs(double sigma, const ParastatParams& p, double alpha);

struct SigmaSolution {
    double sigma = 0.0;
    int iterations = 0;
    double residual = 0.0;  // |sigma - rhs(sigma)|
    bool frozen = false;    // no positive fixed point; sigma reported as 0
    bool bisected = false;  // fixed-point iteration ran out and bisection finished the job
};

/// Largest fixed point of sigma = rhs(sigma) on [0, bose_sum].
///
/// Damped iteration seeded with the Bose sum decreases monotonically onto the
/// largest root, because rhs is increasing in sigma and bounded by the seed.
/// rhs is negative for sigma < 1, so an iterate below 1 means no positive root
/// exists: the system is frozen and sigma = 0 is returned with a FrozenSystem
/// warning. Iteration that exhausts max_iter falls back to bisection.
SigmaSolution solve_sigma(const ParastatParams& p, const SolveConfig& cfg, Warnings* warnings = nullptr);

/// solve_sigma for weighted_sigma_rhs.
SigmaSolution solve_weighted_sigma(const ParastatParams& p, double alpha, const SolveConfig& cfg,
                                   Warnings* warnings = nullptr);

struct ForwardAggregates {
    double sigma = 0.0;
    double E = 0.0;
    double E1 = 0.0;
};

/// (b, kappa, k) -> (sigma, E) through solve_sigma and e1_exact.
ForwardAggregates forward_model(const ParastatParams& p, const SolveConfig& cfg);

/// Search box for fit_params, applied to both b and kappa.
struct FitBox {
    double lo = 1e-12;
    double hi = 1e3;
};

struct FitResult {
    ParastatParams params;
    double sigma = 0.0;           // model sigma at the fitted parameters
    double E = 0.0;               // model payoff at the fitted parameters
    double B = 0.0;
    double sigma_residual = 0.0;  // relative
    double E_residual = 0.0;      // relative
    int iterations = 0;
};

/// Recovers (b, kappa) from observed aggregates by damped Gauss-Newton
/// (Levenberg-Marquardt) on (log b, log kappa) with a finite-difference
/// Jacobian. Throws InfeasibleAggregates when no start point brings the
/// relative residual below 1e-3, NoConvergence when it stalls in between.
FitResult fit_params(double sigma_obs, double E_obs, std::int64_t k, const SolveConfig& cfg, const FitBox& box = {});

}  // namespace debtcrit
