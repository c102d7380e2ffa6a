#pragma once

#include <functional>

namespace debtcrit {

using Integrand = std::function<double(double)>;

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-13;
    unsigned max_depth = 30;   // bisection depth per panel
    double panel_ratio = 4.0;  // ranges wider than this (b/a) are split geometrically first
};

/// Adaptive 15-point Gauss-Kronrod over [a, b]. Positive ranges spanning many
/// decades are cut into geometric panels so each panel sees a well-scaled
/// integrand. Throws QuadratureFailure when the error estimate misses both
/// tolerances.
double integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts = {});

/// Integral of f over [a, b] plus the first `order` Euler-Maclaurin endpoint
/// corrections (order 0: none; 1: (f(a) + f(b))/2; 2: also (f'(b) - f'(a))/12).
/// With integer endpoints and order 2 this approximates sum_{j=a}^{b} f(j).
double euler_maclaurin_integral(const Integrand& f, double a, double b, int order,
                                const QuadratureOptions& opts = {});

}  // namespace debtcrit
