#pragma once

#include <cstdint>

#include "debtcrit/errors.hpp"

namespace debtcrit {

/// m short debts of value s1 due after L1 and n long debts of value s2 due
/// after L2 > L1. Values are already divided by the mean debt.
struct MixedPortfolio {
    std::int64_t m = 0;
    std::int64_t n = 0;
    double s1 = 0.0;
    double s2 = 0.0;
    double L1 = 0.0;
    double L2 = 0.0;

    std::int64_t k() const noexcept { return m + n; }

    /// Throws InvalidArgument on negative counts, an empty book,
    /// non-positive values or durations, or L2 <= L1.
    void validate() const;
};

struct MixedAggregates {
    double sigma = 0.0;  // m s1 + n s2
    double E = 0.0;      // m s1 L2/L1 + n s2
};

MixedAggregates mixed_aggregates(const MixedPortfolio& p);

/// sigma0 = V ln(m + n). SmallK warning for m + n < 10.
double mixed_critical(std::int64_t m, std::int64_t n, double V, Warnings* warnings = nullptr);

struct ShortDominantEstimate {
    double V = 0.0;
    double sigma0 = 0.0;
    double validity = 0.0;  // n/m + L1/L2, the leading neglected ratio
};

/// V ~ s1 L2/L1 and sigma0 ~ s1 (L2/L1) ln m for books dominated by short debts.
/// Below m >= 10 n a LowDominance warning is attached. A book with no short
/// debts falls back to the single long block: V = s2, sigma0 = s2 ln n.
ShortDominantEstimate short_dominant_approx(const MixedPortfolio& p, Warnings* warnings = nullptr);

struct AggregatePathEstimate {
    double V = 0.0;
    double sigma0 = 0.0;
};

/// mixed_aggregates, then V = (E - k sigma)/k and sigma0 = V ln k.
/// Throws NonPositiveVelocity when E <= k sigma.
AggregatePathEstimate aggregate_path(const MixedPortfolio& p, Warnings* warnings = nullptr);

}  // namespace debtcrit
