#include "debtcrit/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "debtcrit/summation.hpp"

namespace debtcrit {

namespace {

constexpr const char* kModule = "asymptotics";

void validate_inputs(double b, double kappa, std::int64_t k) {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "b must be positive");
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "kappa must be positive");
    }
    if (k < 2) {
        throw Error(ErrorKind::InvalidArgument, kModule, "asymptotic forms need k >= 2");
    }
}

double log_ratio(std::int64_t k, double kappa) {
    return std::log1p(static_cast<double>(k) / kappa);
}

// Exponential tail subtracted from ln(k/kappa + 1) at the requested order.
double tail(double B, double kappa, CorrectionOrder order) {
    const double t = std::exp(-B * kappa);
    return order == CorrectionOrder::First ? t + 0.5 * t * t : t;
}

// Position of the minimum of B - L + tail(B): below it the fixed-point map
// stops contracting, so an iterate there proves no root exists.
double tail_turning_point(double kappa, CorrectionOrder order) {
    // d/dB tail = -kappa (t + t^2 [First]) with t = e^{-B kappa}; solve kappa (...) = 1.
    const double t = order == CorrectionOrder::First ? 0.5 * (std::sqrt(1.0 + 4.0 / kappa) - 1.0) : 1.0 / kappa;
    return -std::log(t) / kappa;
}

void flag_regime(double B, Warnings* warnings) {
    if (B < 1.0) {
        warn(warnings, WarningCode::RegimeViolation, kModule,
             "B = " + std::to_string(B) + " < 1: outside the regime where the critical value is meaningful");
    }
}

}  // namespace

double solve_B(std::int64_t k, double kappa, const SolveConfig& cfg, Warnings* warnings, CorrectionOrder order) {
    cfg.validate(kModule);
    if (k < 2) {
        throw Error(ErrorKind::InvalidArgument, kModule, "solve_B needs k >= 2");
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "kappa must be positive");
    }

    const double L = log_ratio(k, kappa);
    const double turning = tail_turning_point(kappa, order);
    if (turning - L + tail(turning, kappa, order) > 0.0) {
        warn(warnings, WarningCode::RegimeViolation, kModule,
             "B-equation has no real root at k = " + std::to_string(k) + ", kappa = " + std::to_string(kappa) +
                 "; using the leading value ln(k/kappa + 1)");
        flag_regime(L, warnings);
        return L;
    }

    double B = L;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const double next = L - tail(B, kappa, order);
        if (std::abs(next - B) <= cfg.tol * std::max(1.0, std::abs(next))) {
            flag_regime(next, warnings);
            return next;
        }
        B = next;
    }
    throw NoConvergenceError(kModule, "B-equation fixed point did not converge", B, cfg.max_iter);
}

double sigma_asym(double b, double kappa, std::int64_t k, const SolveConfig& cfg, Warnings* warnings,
                  CorrectionOrder order) {
    validate_inputs(b, kappa, k);
    const double B = solve_B(k, kappa, cfg, warnings, order);
    return (log_ratio(k, kappa) - tail(B, kappa, order)) / b;
}

double E_asym(double b, double kappa, std::int64_t k, const SolveConfig& cfg, Warnings* warnings) {
    validate_inputs(b, kappa, k);
    const double B = solve_B(k, kappa, cfg, warnings);
    const double kd = static_cast<double>(k);
    return ((kd + kappa + 1.0) * B - kd + kappa * std::exp(-B * kappa)) / b;
}

double E_asym_unsimplified(double b, double kappa, std::int64_t k, const SolveConfig& cfg, Warnings* warnings) {
    validate_inputs(b, kappa, k);
    const double B = solve_B(k, kappa, cfg, warnings);
    const double kd = static_cast<double>(k);
    const double t = std::exp(-B * kappa);
    return ((kd + kappa + 1.0) * (log_ratio(k, kappa) - t) - kd + kappa * t) / b;
}

double reduced_sigma_term(double x, double b, double kappa, double B) {
    const double y = x + kappa;
    const double z = B * y;
    if (z > kExpCutoff) {
        return 1.0 / (b * y);
    }
    const double em1 = std::expm1(z);
    return (em1 - z) / (em1 * y * b);
}

double reduced_sigma_sum(double b, double kappa, std::int64_t k, double B) {
    validate_inputs(b, kappa, k);
    CompensatedSum<double> acc;
    for (std::int64_t j = 1; j <= k; ++j) {
        acc += reduced_sigma_term(static_cast<double>(j), b, kappa, B);
    }
    return acc.value();
}

double reduced_sigma_integral(double b, double kappa, std::int64_t k, double B, int order,
                              const QuadratureOptions& opts) {
    validate_inputs(b, kappa, k);
    return euler_maclaurin_integral([=](double x) { return reduced_sigma_term(x, b, kappa, B); }, 1.0,
                                    static_cast<double>(k), order, opts);
}

AsymptoticResult compare_with_exact(const ParastatParams& p, const SolveConfig& cfg, CorrectionOrder order) {
    validate_inputs(p.b, p.kappa, p.k);
    AsymptoticResult r;
    r.B = solve_B(p.k, p.kappa, cfg, &r.warnings, order);
    r.sigma_asym = (log_ratio(p.k, p.kappa) - tail(r.B, p.kappa, order)) / p.b;
    r.E_asym = E_asym(p.b, p.kappa, p.k, cfg);

    const auto exact = forward_model(p, cfg);
    r.sigma_exact = exact.sigma;
    r.E_exact = exact.E;
    if (exact.sigma > 0.0) {
        r.sigma_rel_dev = std::abs(exact.sigma - r.sigma_asym) / exact.sigma;
        r.E_rel_dev = std::abs(exact.E - r.E_asym) / exact.E;
    } else {
        warn(&r.warnings, WarningCode::FrozenSystem, kModule, "exact sum is frozen; deviations are undefined");
        r.sigma_rel_dev = std::numeric_limits<double>::infinity();
        r.E_rel_dev = std::numeric_limits<double>::infinity();
    }
    return r;
}

}  // namespace debtcrit
