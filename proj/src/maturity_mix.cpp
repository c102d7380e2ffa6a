#include "debtcrit/maturity_mix.hpp"

#include <cmath>
#include <string>

#include "debtcrit/critical.hpp"

namespace debtcrit {

namespace {

constexpr const char* kModule = "maturity-mix";

bool positive(double x) {
    return x > 0.0 && std::isfinite(x);
}

}  // namespace

void MixedPortfolio::validate() const {
    if (m < 0 || n < 0 || m + n < 1) {
        throw Error(ErrorKind::InvalidArgument, kModule, "need m, n >= 0 with at least one debt");
    }
    if (!positive(s1) || !positive(s2)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "debt values s1, s2 must be positive");
    }
    if (!positive(L1) || !positive(L2)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "durations L1, L2 must be positive");
    }
    if (!(L2 > L1)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "long duration L2 must exceed short duration L1");
    }
}

MixedAggregates mixed_aggregates(const MixedPortfolio& p) {
    p.validate();
    const double m = static_cast<double>(p.m);
    const double n = static_cast<double>(p.n);
    return MixedAggregates{m * p.s1 + n * p.s2, m * p.s1 * (p.L2 / p.L1) + n * p.s2};
}

double mixed_critical(std::int64_t m, std::int64_t n, double V, Warnings* warnings) {
    if (m < 0 || n < 0 || m + n < 2) {
        throw Error(ErrorKind::InvalidArgument, kModule, "mixed_critical needs m, n >= 0 and m + n >= 2");
    }
    if (!positive(V)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "velocity V must be positive");
    }
    if (m + n < 10) {
        warn(warnings, WarningCode::SmallK, kModule,
             "m + n = " + std::to_string(m + n) + " < 10; the critical-value formula assumes many creditors");
    }
    return V * std::log(static_cast<double>(m + n));
}

ShortDominantEstimate short_dominant_approx(const MixedPortfolio& p, Warnings* warnings) {
    p.validate();
    if (p.m < 10 * p.n) {
        warn(warnings, WarningCode::LowDominance, kModule,
             "m = " + std::to_string(p.m) + " < 10 n = " + std::to_string(10 * p.n) +
                 "; the short-dominant approximation is loose");
    }
    const double ratio = p.L1 / p.L2;
    ShortDominantEstimate out;
    if (p.m == 0) {
        out.V = p.s2;
        out.sigma0 = p.n >= 2 ? p.s2 * std::log(static_cast<double>(p.n)) : 0.0;
        out.validity = 0.0;
        return out;
    }
    out.V = p.s1 / ratio;
    out.sigma0 = out.V * std::log(static_cast<double>(p.m));
    out.validity = static_cast<double>(p.n) / static_cast<double>(p.m) + ratio;
    return out;
}

AggregatePathEstimate aggregate_path(const MixedPortfolio& p, Warnings* warnings) {
    const auto agg = mixed_aggregates(p);
    if (p.k() < 10) {
        warn(warnings, WarningCode::SmallK, kModule, "m + n < 10; the critical-value formula assumes many creditors");
    }
    const auto crit = critical_from_aggregates(agg.E, agg.sigma, p.k());
    return AggregatePathEstimate{crit.V, crit.sigma0};
}

}  // namespace debtcrit
