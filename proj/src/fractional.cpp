#include "debtcrit/fractional.hpp"

#include <cmath>
#include <string>

#include "debtcrit/quadrature.hpp"

namespace debtcrit {

namespace {

constexpr const char* kModule = "fractional";

void require_fractional_alpha(double alpha) {
    if (!(alpha >= 0.5 && alpha < 1.0)) {
        throw Error(ErrorKind::DomainError, kModule,
                    "alpha = " + std::to_string(alpha) +
                        " is outside [0.5, 1); alpha = 1 (d = 2) is the singular boundary");
    }
}

}  // namespace

Dimension Dimension::from_alpha(double alpha) {
    require_fractional_alpha(alpha);
    return Dimension(alpha);
}

Dimension Dimension::from_d(double d) {
    return from_alpha(0.5 * d);
}

double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::DomainError, kModule, "gamma_fn needs x > 0");
    }
    return std::tgamma(x);
}

double zeta_fn(double s) {
    if (!(s > 1.0) || !std::isfinite(s)) {
        throw Error(ErrorKind::DomainError, kModule, "zeta_fn needs s > 1");
    }
    return std::riemann_zeta(s);
}

double f_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.7)) {
        throw Error(ErrorKind::DomainError, kModule, "f_alpha is defined here on (0, 1.7]");
    }
    return alpha * alpha * gamma_fn(alpha) * zeta_fn(1.0 + alpha);
}

double velocity_from_energy(double E, double alpha) {
    return energy_law_from_energy(E, alpha).V;
}

EnergyLaw energy_law_from_energy(double E, double alpha) {
    require_fractional_alpha(alpha);
    if (!(E > 0.0) || !std::isfinite(E)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "energy E must be positive");
    }
    EnergyLaw law;
    law.f_alpha = f_alpha(alpha);
    law.E = E;
    law.V = std::pow(E / law.f_alpha, 1.0 / (1.0 + alpha));
    return law;
}

double sigma_rhs_frac(double sigma, const ParastatParams& p, double alpha) {
    require_fractional_alpha(alpha);
    return weighted_sigma_rhs(sigma, p, alpha);
}

SigmaSolution solve_sigma_frac(const ParastatParams& p, double alpha, const SolveConfig& cfg, Warnings* warnings) {
    require_fractional_alpha(alpha);
    return solve_weighted_sigma(p, alpha, cfg, warnings);
}

double critical_sigma_frac(double alpha, double V) {
    require_fractional_alpha(alpha);
    if (!(V > 0.0) || !std::isfinite(V)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "velocity V must be positive");
    }
    return alpha / (1.0 - alpha) * V;
}

FractionalCritical sigma0_frac_numeric(double alpha, double b, std::int64_t k, const SolveConfig& cfg,
                                       Warnings* warnings) {
    require_fractional_alpha(alpha);
    cfg.validate(kModule);
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "b must be positive");
    }
    if (k < 2) {
        throw Error(ErrorKind::InvalidArgument, kModule, "sigma0_frac_numeric needs k >= 2");
    }
    if (k < 100) {
        warn(warnings, WarningCode::SmallK, kModule,
             "k = " + std::to_string(k) + " < 100; the fractional expansion assumes many creditors");
    }

    const double kd = static_cast<double>(k);
    auto rhs = [alpha, kd](double B) {
        return alpha * euler_maclaurin_integral(
                           [alpha, B](double x) { return std::pow(x, alpha - 2.0) * (1.0 - B * x * std::exp(-B * x)); },
                           1.0, kd, 0);
    };

    FractionalCritical out;
    out.leading = alpha / ((1.0 - alpha) * b);
    out.sigma01 = (1.0 - std::pow(kd, alpha - 1.0)) / (1.0 - alpha);

    double B = alpha / (1.0 - alpha);
    bool converged = false;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const double next = (1.0 - cfg.damping) * B + cfg.damping * rhs(B);
        const bool done = std::abs(next - B) <= cfg.tol * std::max(1.0, std::abs(next));
        B = next;
        if (done) {
            out.iterations = it;
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NoConvergenceError(kModule, "fractional critical fixed point did not converge", B / b, cfg.max_iter);
    }

    out.B0 = B;
    out.sigma0 = B / b;
    // Negative: the correction removes the B0 x e^{-B0 x} part of the integrand.
    out.sigma02 = -0.5 * std::exp(-B);
    out.expansion = alpha / b * (out.sigma01 + out.sigma02);
    return out;
}

}  // namespace debtcrit
