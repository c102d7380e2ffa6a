#include "debtcrit/critical.hpp"

#include <string>

#include "debtcrit/quadrature.hpp"

namespace debtcrit {

namespace {

constexpr const char* kModule = "critical";

void require_k(std::int64_t k) {
    if (k < 2) {
        throw Error(ErrorKind::InvalidArgument, kModule, "critical values need k >= 2");
    }
}

void require_velocity(double V) {
    if (!(V > 0.0) || !std::isfinite(V)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "velocity V must be positive");
    }
}

void flag_small_k(std::int64_t k, Warnings* warnings) {
    if (k < 10) {
        warn(warnings, WarningCode::SmallK, kModule,
             "k = " + std::to_string(k) + " < 10; the critical-value formulas assume many creditors");
    }
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Solvent: return "Solvent";
        case Verdict::Indeterminate: return "Indeterminate";
        case Verdict::Bankrupt: return "Bankrupt";
    }
    return "Unknown";
}

double entropy(double V, std::int64_t k, double B, double kappa, Warnings* warnings) {
    require_velocity(V);
    require_k(k);
    if (!(kappa >= 0.0) || !std::isfinite(B)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "entropy needs finite B and kappa >= 0");
    }
    if (B < 1.0) {
        warn(warnings, WarningCode::RegimeViolation, kModule, "entropy evaluated at B < 1");
    }
    const double kd = static_cast<double>(k);
    const double B2 = B * B;
    const double third = kappa == 0.0 ? 0.0 : std::exp(-B * kappa) * B2 * kappa * kappa;
    return kEntropyConstant * (-kd + kd * B2 * std::exp(-B) - third);
}

double critical_sigma_entropy(std::int64_t k, double V, Warnings* warnings) {
    require_k(k);
    require_velocity(V);
    flag_small_k(k, warnings);
    const double kd = static_cast<double>(k);
    return V * (std::log(kd) - 1.0 / kd);
}

double critical_sigma_leading(std::int64_t k, double V) {
    require_k(k);
    require_velocity(V);
    return V * std::log(static_cast<double>(k));
}

ChempotSolution solve_critical_chempot(std::int64_t k, double V, const SolveConfig& cfg, Warnings* warnings) {
    require_k(k);
    require_velocity(V);
    cfg.validate(kModule);
    flag_small_k(k, warnings);

    const double kd = static_cast<double>(k);
    auto rhs = [kd](double B) {
        return euler_maclaurin_integral([B](double x) { return (1.0 - B * x * std::exp(-B * x)) / x; }, 1.0, kd, 0);
    };

    double B = std::log(kd);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const double next = (1.0 - cfg.damping) * B + cfg.damping * rhs(B);
        if (std::abs(next - B) <= cfg.tol * std::max(1.0, std::abs(next))) {
            return ChempotSolution{V * next, next, it};
        }
        B = next;
    }
    throw NoConvergenceError(kModule, "chemical-potential fixed point did not converge", V * B, cfg.max_iter);
}

double critical_sigma_chempot(std::int64_t k, double V, const SolveConfig& cfg, Warnings* warnings) {
    return solve_critical_chempot(k, V, cfg, warnings).sigma0;
}

AggregateCritical critical_from_aggregates(double E, double sigma, std::int64_t k) {
    require_k(k);
    if (!std::isfinite(E) || !std::isfinite(sigma)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "aggregates must be finite");
    }
    const double kd = static_cast<double>(k);
    const double V = (E - kd * sigma) / kd;
    if (!(V > 0.0)) {
        throw Error(ErrorKind::NonPositiveVelocity, kModule,
                    "E - k sigma = " + std::to_string(E - kd * sigma) +
                        " <= 0 gives a non-positive velocity of money circulation");
    }
    return AggregateCritical{V, V * std::log(kd)};
}

Verdict solvency_verdict(double sigma, double sigma0, double rtol) {
    if (!(sigma0 > 0.0) || !(rtol >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "verdict needs sigma0 > 0 and rtol >= 0");
    }
    if (sigma > sigma0 * (1.0 + rtol)) return Verdict::Bankrupt;
    if (sigma < sigma0 * (1.0 - rtol)) return Verdict::Solvent;
    return Verdict::Indeterminate;
}

CriticalReport critical_report(double sigma, std::int64_t k, double V, const SolveConfig& cfg, double rtol) {
    CriticalReport r;
    r.V = V;
    r.sigma0_entropy = critical_sigma_entropy(k, V, &r.warnings);
    r.sigma0_leading = critical_sigma_leading(k, V);
    r.sigma0_chempot = critical_sigma_chempot(k, V, cfg);
    r.coincidence_gap = std::abs(r.sigma0_entropy - r.sigma0_chempot) / V;
    r.verdict = solvency_verdict(sigma, r.sigma0_entropy, rtol);
    return r;
}

CriticalDiagnostics critical_point_diagnostics(std::span<const TrajectoryState> trajectory,
                                               const DiagnosticsConfig& cfg) {
    if (trajectory.empty()) {
        throw Error(ErrorKind::EmptyTrajectory, kModule, "trajectory has no states");
    }
    CriticalDiagnostics out;
    out.states.reserve(trajectory.size());
    for (const auto& s : trajectory) {
        StateDiagnostics d;
        if (s.V > 0.0 && s.k >= 1) {
            const double lnk = std::log(static_cast<double>(s.k));
            d.critical_residual = std::abs(lnk - s.sigma / s.V);
            d.critical_candidate = std::abs(s.kappa) <= cfg.kappa_tol && *d.critical_residual <= cfg.critical_rtol * lnk;
        }
        out.states.push_back(d);
    }

    const std::size_t window = std::max<std::size_t>(cfg.window, 3);
    if (trajectory.size() >= window) {
        bool decreasing = true;
        for (std::size_t i = trajectory.size() - window + 1; i < trajectory.size() && decreasing; ++i) {
            const auto& prev = trajectory[i - 1];
            const auto& cur = trajectory[i];
            // 1/ln k falls exactly when k grows (k > 1 throughout).
            decreasing = cur.kappa < prev.kappa && cur.V < prev.V && prev.k > 1 && cur.k > prev.k;
        }
        out.approaching_critical = decreasing;
    }

    const auto& last = trajectory.back();
    out.critical_reached = std::abs(last.kappa) <= cfg.kappa_tol && last.V <= cfg.velocity_tol;
    if (out.critical_reached || out.states.back().critical_candidate) {
        out.critical_point = CriticalPointState{last.k, 0.0, std::max(last.V, 0.0), last.sigma};
    }
    return out;
}

}  // namespace debtcrit
