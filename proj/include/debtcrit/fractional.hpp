#pragma once

#include <cstdint>

#include "debtcrit/errors.hpp"
#include "debtcrit/parastat.hpp"
#include "debtcrit/solve_config.hpp"

namespace debtcrit {

/// Fractal dimension of the economic system in the fractional regime,
/// alpha = d/2 in [0.5, 1). d = 2 is the singular boundary handled by the
/// integer-dimension modules and is rejected here.
class Dimension {
public:
    static Dimension from_d(double d);
    static Dimension from_alpha(double alpha);

    double d() const noexcept { return 2.0 * alpha_; }
    double alpha() const noexcept { return alpha_; }
    double delta() const noexcept { return 2.0 - d(); }  // gap below the d = 2 boundary

private:
    explicit Dimension(double alpha) : alpha_(alpha) {}
    double alpha_;
};

/// Gamma function for x > 0.
double gamma_fn(double x);

/// Riemann zeta for real s > 1.
double zeta_fn(double s);

/// f(alpha) = alpha^2 Gamma(alpha) zeta(1 + alpha), defined here on (0, 1.7].
double f_alpha(double alpha);

/// Energy law E = f(alpha) V^{1 + alpha}.
struct EnergyLaw {
    double f_alpha = 0.0;
    double E = 0.0;
    double V = 0.0;
};

/// V = (E / f(alpha))^{1/(1 + alpha)}.
double velocity_from_energy(double E, double alpha);
EnergyLaw energy_law_from_energy(double E, double alpha);

/// alpha sum_j j^{alpha-1} [1/(e^{b(j+kappa)} - 1) - sigma/(e^{b sigma (j+kappa)} - 1)].
double sigma_rhs_frac(double sigma, const ParastatParams& p, double alpha);

/// Largest fixed point of sigma = sigma_rhs_frac(sigma); see solve_sigma.
SigmaSolution solve_sigma_frac(const ParastatParams& p, double alpha, const SolveConfig& cfg,
                               Warnings* warnings = nullptr);

/// Closed-form critical debt alpha V / (1 - alpha).
double critical_sigma_frac(double alpha, double V);

struct FractionalCritical {
    double sigma0 = 0.0;     // self-consistent quadrature value
    double B0 = 0.0;         // b sigma0
    double sigma01 = 0.0;    // principal term (1 - k^{alpha-1}) / (1 - alpha)
    double sigma02 = 0.0;    // correction term -e^{-B0}/2
    double expansion = 0.0;  // (alpha/b)(sigma01 + sigma02)
    double leading = 0.0;    // alpha / ((1 - alpha) b)
    int iterations = 0;
};

/// Solves sigma0 = (alpha/b) integral_1^k x^{alpha-2} (1 - B0 x e^{-B0 x}) dx with
/// B0 = b sigma0 by fixed-point iteration on B0 from alpha/(1 - alpha), and
/// reports the two-term expansion alongside.
FractionalCritical sigma0_frac_numeric(double alpha, double b, std::int64_t k, const SolveConfig& cfg,
                                       Warnings* warnings = nullptr);

}  // namespace debtcrit
