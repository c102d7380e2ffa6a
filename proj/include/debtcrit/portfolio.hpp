#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace debtcrit {

/// One raw debt: an amount in currency units due after `duration` time units.
struct DebtRecord {
    std::string id;
    double amount = 0.0;
    double duration = 0.0;
};

/// Dimensionless view of a portfolio on an integer reverse-duration grid.
///
/// Slot j (1-based) carries reverse duration k + 1 - j, so slot 1 holds the
/// shortest debts. Slots no debt maps to are virtual and hold zero.
struct NormalizedPortfolio {
    std::int64_t k = 0;
    std::vector<double> slots;                   // slots[j-1] is the debt in slot j, divided by s_hat
    std::vector<std::int64_t> reverse_durations; // reverse_durations[j-1] == k + 1 - j
    double s_hat = 0.0;                          // mean of the original amounts
    double sigma = 0.0;                          // sum of slots
    double E = 0.0;                              // sum of reverse_duration * slot
    double E1 = 0.0;                             // sum of j * slot
    std::size_t record_count = 0;
};

/// Largest grid the normalizer will allocate.
inline constexpr std::int64_t kMaxSlots = 100'000'000;

/// Sorts, integerizes and rescales `debts`.
///
/// A debt of duration l lands on reverse duration round(grid_resolution * l_max / l)
/// (half away from zero). Debts sharing a slot are summed. The result does not
/// depend on input order or on the currency unit.
NormalizedPortfolio normalize(std::span<const DebtRecord> debts, int grid_resolution = 1);

/// True when rescaling every amount by `c` leaves the normalized portfolio
/// unchanged within 1e-12 relative.
bool scale_check(std::span<const DebtRecord> debts, double c, int grid_resolution = 1);

/// Parses `id,amount,duration` CSV. Errors name the offending line.
std::vector<DebtRecord> read_debts_csv(std::istream& in);
std::vector<DebtRecord> load_debts_csv(const std::filesystem::path& path);

}  // namespace debtcrit
