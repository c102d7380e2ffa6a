#include "debtcrit/parastat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "debtcrit/summation.hpp"

namespace debtcrit {

namespace {

constexpr const char* kModule = "parastat-core";

double bose_factor(double a) {
    return a > kExpCutoff ? 0.0 : 1.0 / std::expm1(a);
}

// sigma / (e^{B x} - 1), continuous at sigma = 0 where it tends to 1/(b x).
double scaled_bose(double sigma, double B, double b, double x) {
    if (sigma == 0.0) {
        return 1.0 / (b * x);
    }
    const double a = B * x;
    return a > kExpCutoff ? 0.0 : sigma / std::expm1(a);
}

double checked(double value) {
    if (!std::isfinite(value)) {
        throw Error(ErrorKind::NumericalOverflow, kModule, "parastatistic sum is not finite");
    }
    return value;
}

// Accumulates weight(j) * term_j for j = 1..k.
template <typename Weight>
double parastat_sum(double sigma, const ParastatParams& p, Weight weight) {
    const double B = p.b * sigma;
    CompensatedSum<double> acc;
    for (std::int64_t j = 1; j <= p.k; ++j) {
        const double x = static_cast<double>(j) + p.kappa;
        const double first = p.b * x;
        if (first > kExpCutoff && (sigma == 0.0 || B * x > kExpCutoff)) {
            break;  // every later term is zero too
        }
        const double term = bose_factor(first) - scaled_bose(sigma, B, p.b, x);
        acc += weight(j) * term;
    }
    return checked(acc.value());
}

double weighted_bose_sum(const ParastatParams& p, double alpha) {
    CompensatedSum<double> acc;
    for (std::int64_t j = 1; j <= p.k; ++j) {
        const double a = p.b * (static_cast<double>(j) + p.kappa);
        if (a > kExpCutoff) break;
        const double w = alpha == 1.0 ? 1.0 : alpha * std::pow(static_cast<double>(j), alpha - 1.0);
        acc += w * bose_factor(a);
    }
    return checked(acc.value());
}

bool within_tol(double sigma, double rhs, double tol) {
    return std::abs(sigma - rhs) <= tol * std::max(1.0, sigma);
}

SigmaSolution frozen_solution(double rhs_at_zero, int iterations, Warnings* warnings) {
    warn(warnings, WarningCode::FrozenSystem, kModule,
         "no positive fixed point of the sigma equation; system is frozen (sigma = 0)");
    SigmaSolution s;
    s.sigma = 0.0;
    s.iterations = iterations;
    s.residual = std::abs(rhs_at_zero);
    s.frozen = true;
    return s;
}

// Bisection on g(s) = s - rhs(s), entered only when iteration exhausted its
// budget. `hi` lies above the largest root, so g(hi) > 0; walk down until g < 0.
SigmaSolution bisection_fallback(double hi, int iterations, const ParastatParams& p, double alpha,
                                 const SolveConfig& cfg) {
    auto g = [&](double s) { return s - weighted_sigma_rhs(s, p, alpha); };
    const double g_hi = g(hi);
    double step = std::max(std::abs(g_hi), cfg.tol * hi);
    double lo = hi;
    bool bracketed = false;
    while (lo > 1.0) {
        lo = std::max(1.0, hi - step);
        if (g(lo) < 0.0) {
            bracketed = true;
            break;
        }
        step *= 2.0;
    }
    if (!bracketed) {
        throw Error(ErrorKind::NoRoot, kModule,
                    "sigma - rhs(sigma) has no sign change below the last iterate " + std::to_string(hi));
    }
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double r = weighted_sigma_rhs(mid, p, alpha);
        if (within_tol(mid, r, cfg.tol)) {
            SigmaSolution s;
            s.sigma = mid;
            s.iterations = iterations + i + 1;
            s.residual = std::abs(mid - r);
            s.bisected = true;
            return s;
        }
        (mid - r < 0.0 ? lo : hi) = mid;
    }
    throw NoConvergenceError(kModule, "bisection fallback did not reach tolerance", 0.5 * (lo + hi),
                             iterations + 400);
}

}  // namespace

void ParastatParams::validate(const char* module) const {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw Error(ErrorKind::InvalidArgument, module, "b must be positive");
    }
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw Error(ErrorKind::InvalidArgument, module, "kappa must be non-negative");
    }
    if (k < 1) {
        throw Error(ErrorKind::InvalidArgument, module, "k must be at least 1");
    }
}

double weighted_sigma_rhs(double sigma, const ParastatParams& p, double alpha) {
    p.validate(kModule);
    if (!(sigma >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "sigma must be non-negative");
    }
    if (alpha == 1.0) {
        return parastat_sum(sigma, p, [](std::int64_t) { return 1.0; });
    }
    return parastat_sum(sigma, p, [alpha](std::int64_t j) {
        return alpha * std::pow(static_cast<double>(j), alpha - 1.0);
    });
}

double sigma_rhs(double sigma, const ParastatParams& p) {
    return weighted_sigma_rhs(sigma, p, 1.0);
}

double e1_exact(double sigma, const ParastatParams& p) {
    p.validate(kModule);
    if (!(sigma >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "sigma must be non-negative");
    }
    return parastat_sum(sigma, p, [](std::int64_t j) { return static_cast<double>(j); });
}

double payoff_exact(double sigma, const ParastatParams& p) {
    return static_cast<double>(p.k + 1) * sigma - e1_exact(sigma, p);
}

double bose_sum(const ParastatParams& p) {
    p.validate(kModule);
    return weighted_bose_sum(p, 1.0);
}

SigmaSolution solve_weighted_sigma(const ParastatParams& p, double alpha, const SolveConfig& cfg,
                                   Warnings* warnings) {
    p.validate(kModule);
    cfg.validate(kModule);

    double sigma = weighted_bose_sum(p, alpha);
    if (sigma < 1.0) {
        return frozen_solution(weighted_sigma_rhs(0.0, p, alpha), 0, warnings);
    }
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const double rhs = weighted_sigma_rhs(sigma, p, alpha);
        if (within_tol(sigma, rhs, cfg.tol)) {
            SigmaSolution s;
            s.sigma = sigma;
            s.iterations = it;
            s.residual = std::abs(sigma - rhs);
            return s;
        }
        const double next = (1.0 - cfg.damping) * sigma + cfg.damping * rhs;
        if (next < 1.0) {
            return frozen_solution(weighted_sigma_rhs(0.0, p, alpha), it, warnings);
        }
        sigma = next;
    }
    return bisection_fallback(sigma, cfg.max_iter, p, alpha, cfg);
}

SigmaSolution solve_sigma(const ParastatParams& p, const SolveConfig& cfg, Warnings* warnings) {
    return solve_weighted_sigma(p, 1.0, cfg, warnings);
}

ForwardAggregates forward_model(const ParastatParams& p, const SolveConfig& cfg) {
    const auto sol = solve_sigma(p, cfg);
    ForwardAggregates out;
    out.sigma = sol.sigma;
    out.E1 = e1_exact(sol.sigma, p);
    out.E = static_cast<double>(p.k + 1) * sol.sigma - out.E1;
    return out;
}

namespace {

struct Residual {
    std::array<double, 2> r{};
    double sigma = 0.0;
    double E = 0.0;
    bool ok = false;

    double cost() const { return ok ? r[0] * r[0] + r[1] * r[1] : std::numeric_limits<double>::infinity(); }
    double max_abs() const {
        return ok ? std::max(std::abs(r[0]), std::abs(r[1])) : std::numeric_limits<double>::infinity();
    }
};

class FitProblem {
public:
    FitProblem(double sigma_obs, double E_obs, std::int64_t k, const SolveConfig& cfg, const FitBox& box)
        : sigma_obs_(sigma_obs), E_obs_(E_obs), k_(k), cfg_(cfg), lo_(std::log(box.lo)), hi_(std::log(box.hi)) {
        cfg_.tol = std::min(cfg.tol, 1e-13);
    }

    std::array<double, 2> clamp(std::array<double, 2> u) const {
        for (auto& v : u) v = std::clamp(v, lo_, hi_);
        return u;
    }

    Residual evaluate(const std::array<double, 2>& u) const {
        Residual res;
        try {
            const ParastatParams p{std::exp(u[0]), std::exp(u[1]), k_};
            const auto agg = forward_model(p, cfg_);
            res.sigma = agg.sigma;
            res.E = agg.E;
            res.r = {(agg.sigma - sigma_obs_) / sigma_obs_, (agg.E - E_obs_) / E_obs_};
            res.ok = std::isfinite(res.r[0]) && std::isfinite(res.r[1]);
        } catch (const Error&) {
            res.ok = false;
        }
        return res;
    }

    // Levenberg-Marquardt from `u`; returns the best point reached.
    std::pair<std::array<double, 2>, Residual> run(std::array<double, 2> u, int max_outer, int& iterations) const {
        u = clamp(u);
        Residual cur = evaluate(u);
        if (!cur.ok) return {u, cur};
        double mu = 1e-3;
        for (int outer = 0; outer < max_outer; ++outer) {
            ++iterations;
            if (cur.max_abs() <= 1e-13) break;

            std::array<std::array<double, 2>, 2> J{};
            bool jac_ok = true;
            for (int c = 0; c < 2; ++c) {
                constexpr double h = 1e-7;
                auto up = u;
                const double dir = (u[c] + h > hi_) ? -1.0 : 1.0;
                up[c] += dir * h;
                const auto rp = evaluate(up);
                if (!rp.ok) {
                    jac_ok = false;
                    break;
                }
                for (int r = 0; r < 2; ++r) J[r][c] = (rp.r[r] - cur.r[r]) / (dir * h);
            }
            if (!jac_ok) break;

            // Normal equations of the 2x2 system.
            const double a00 = J[0][0] * J[0][0] + J[1][0] * J[1][0];
            const double a01 = J[0][0] * J[0][1] + J[1][0] * J[1][1];
            const double a11 = J[0][1] * J[0][1] + J[1][1] * J[1][1];
            const double g0 = J[0][0] * cur.r[0] + J[1][0] * cur.r[1];
            const double g1 = J[0][1] * cur.r[0] + J[1][1] * cur.r[1];
            const double d0 = std::max(a00, 1e-12);
            const double d1 = std::max(a11, 1e-12);

            bool accepted = false;
            double step_norm = 0.0;
            while (mu < 1e14) {
                const double m00 = a00 + mu * d0;
                const double m11 = a11 + mu * d1;
                const double det = m00 * m11 - a01 * a01;
                if (!(std::abs(det) > 0.0)) {
                    mu *= 4.0;
                    continue;
                }
                std::array<double, 2> step{(-g0 * m11 + g1 * a01) / det, (-g1 * m00 + g0 * a01) / det};
                // Keep single steps modest in log space.
                const double len = std::hypot(step[0], step[1]);
                if (len > 2.0) {
                    step[0] *= 2.0 / len;
                    step[1] *= 2.0 / len;
                }
                const auto un = clamp({u[0] + step[0], u[1] + step[1]});
                step_norm = std::hypot(un[0] - u[0], un[1] - u[1]);
                const auto rn = evaluate(un);
                if (rn.cost() < cur.cost()) {
                    u = un;
                    cur = rn;
                    mu = std::max(mu / 3.0, 1e-12);
                    accepted = true;
                    break;
                }
                if (step_norm < 1e-15) break;
                mu *= 4.0;
            }
            if (!accepted || step_norm < 1e-15) break;
        }
        return {u, cur};
    }

private:
    double sigma_obs_;
    double E_obs_;
    std::int64_t k_;
    SolveConfig cfg_;
    double lo_;
    double hi_;
};

// B from B = ln(k/kappa + 1) - e^{-B kappa}; only used to seed the fit.
double seed_B(std::int64_t k, double kappa) {
    const double L = std::log(static_cast<double>(k) / kappa + 1.0);
    double B = L;
    for (int i = 0; i < 100; ++i) B = L - std::exp(-B * kappa);
    return B;
}

}  // namespace

FitResult fit_params(double sigma_obs, double E_obs, std::int64_t k, const SolveConfig& cfg, const FitBox& box) {
    cfg.validate(kModule);
    if (!(sigma_obs > 0.0) || !std::isfinite(sigma_obs) || !std::isfinite(E_obs)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "sigma_obs must be positive and finite");
    }
    if (k < 2) {
        throw Error(ErrorKind::InvalidArgument, kModule, "fit_params needs k >= 2");
    }
    if (!(box.lo > 0.0) || !(box.hi > box.lo)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "fit box must satisfy 0 < lo < hi");
    }
    if (!(E_obs > sigma_obs)) {
        throw Error(ErrorKind::InfeasibleAggregates, kModule,
                    "payoff total E must exceed the debt total sigma (durations force E > sigma)");
    }

    const FitProblem problem(sigma_obs, E_obs, k, cfg, box);
    const int max_outer = std::min(cfg.max_iter, 200);
    int iterations = 0;

    std::array<double, 2> best_u{};
    Residual best;
    for (const double kappa0 : {1.0, 0.1, 10.0, 0.01, 100.0}) {
        const double b0 = seed_B(k, kappa0) / sigma_obs;
        auto [u, res] = problem.run({std::log(b0), std::log(kappa0)}, max_outer, iterations);
        if (res.cost() < best.cost()) {
            best_u = u;
            best = res;
        }
        if (best.max_abs() <= 1e-8) break;
    }

    if (!(best.max_abs() <= 1e-3)) {
        throw Error(ErrorKind::InfeasibleAggregates, kModule,
                    "no (b, kappa) in the search box reproduces sigma = " + std::to_string(sigma_obs) +
                        ", E = " + std::to_string(E_obs) + " at k = " + std::to_string(k));
    }
    if (!(best.max_abs() <= 1e-8)) {
        throw NoConvergenceError(kModule, "parameter fit stalled above the 1e-8 residual target",
                                 std::exp(best_u[0]), iterations);
    }

    FitResult out;
    out.params = ParastatParams{std::exp(best_u[0]), std::exp(best_u[1]), k};
    out.sigma = best.sigma;
    out.E = best.E;
    out.B = out.params.b * best.sigma;
    out.sigma_residual = best.r[0];
    out.E_residual = best.r[1];
    out.iterations = iterations;
    return out;
}

}  // namespace debtcrit
