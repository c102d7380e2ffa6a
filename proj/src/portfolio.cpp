#include "debtcrit/portfolio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <string_view>

#include "debtcrit/errors.hpp"
#include "debtcrit/summation.hpp"

namespace debtcrit {

namespace {

constexpr const char* kModule = "portfolio";

void validate_records(std::span<const DebtRecord> debts) {
    if (debts.empty()) {
        throw Error(ErrorKind::EmptyPortfolio, kModule, "portfolio has no debt records");
    }
    for (const auto& d : debts) {
        if (!(d.amount > 0.0) || !std::isfinite(d.amount)) {
            throw Error(ErrorKind::NonPositiveAmount, kModule, "debt '" + d.id + "' has a non-positive amount");
        }
        if (!(d.duration > 0.0) || !std::isfinite(d.duration)) {
            throw Error(ErrorKind::NonPositiveDuration, kModule,
                        "debt '" + d.id + "' has a non-positive duration");
        }
    }
}

bool close(double a, double b, double rtol) {
    return std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b));
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line, const char* what) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw Error(ErrorKind::ParseError, kModule,
                    "line " + std::to_string(line) + ": " + what + " '" + std::string(field) +
                        "' is not a decimal number");
    }
    return value;
}

}  // namespace

NormalizedPortfolio normalize(std::span<const DebtRecord> debts, int grid_resolution) {
    validate_records(debts);
    if (grid_resolution < 1) {
        throw Error(ErrorKind::InvalidArgument, kModule, "grid_resolution must be at least 1");
    }

    // Canonical order makes every floating-point sum below independent of the
    // caller's ordering.
    std::vector<std::size_t> order(debts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = debts[a];
        const auto& y = debts[b];
        if (x.duration != y.duration) return x.duration < y.duration;
        if (x.amount != y.amount) return x.amount < y.amount;
        return x.id < y.id;
    });

    const double l_max = debts[order.back()].duration;
    std::vector<std::int64_t> reverse(order.size());
    std::int64_t k = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const double r = std::round(static_cast<double>(grid_resolution) * l_max / debts[order[i]].duration);
        if (!(r <= static_cast<double>(kMaxSlots))) {
            throw Error(ErrorKind::InvalidArgument, kModule,
                        "duration spread needs more than " + std::to_string(kMaxSlots) + " slots");
        }
        reverse[i] = static_cast<std::int64_t>(r);
        k = std::max(k, reverse[i]);
    }

    CompensatedSum<double> total_amount;
    std::vector<CompensatedSum<double>> merged(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < order.size(); ++i) {
        const double amount = debts[order[i]].amount;
        total_amount += amount;
        const auto j = k + 1 - reverse[i];
        merged[static_cast<std::size_t>(j - 1)] += amount;
    }

    NormalizedPortfolio p;
    p.k = k;
    p.record_count = debts.size();
    p.s_hat = total_amount.value() / static_cast<double>(debts.size());
    p.slots.resize(static_cast<std::size_t>(k));
    p.reverse_durations.resize(static_cast<std::size_t>(k));

    CompensatedSum<double> sigma;
    CompensatedSum<double> e;
    CompensatedSum<double> e1;
    for (std::int64_t j = 1; j <= k; ++j) {
        const auto idx = static_cast<std::size_t>(j - 1);
        const double s = merged[idx].value() / p.s_hat;
        p.slots[idx] = s;
        p.reverse_durations[idx] = k + 1 - j;
        sigma += s;
        e += static_cast<double>(k + 1 - j) * s;
        e1 += static_cast<double>(j) * s;
    }
    p.sigma = sigma.value();
    p.E = e.value();
    p.E1 = e1.value();
    return p;
}

bool scale_check(std::span<const DebtRecord> debts, double c, int grid_resolution) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw Error(ErrorKind::InvalidArgument, kModule, "scale factor must be positive");
    }
    const auto base = normalize(debts, grid_resolution);
    std::vector<DebtRecord> scaled(debts.begin(), debts.end());
    for (auto& d : scaled) {
        d.amount *= c;
    }
    const auto other = normalize(scaled, grid_resolution);

    constexpr double rtol = 1e-12;
    if (base.k != other.k || base.reverse_durations != other.reverse_durations) {
        return false;
    }
    if (!close(base.sigma, other.sigma, rtol) || !close(base.E, other.E, rtol) || !close(base.E1, other.E1, rtol)) {
        return false;
    }
    if (!close(base.s_hat * c, other.s_hat, rtol)) {
        return false;
    }
    for (std::size_t i = 0; i < base.slots.size(); ++i) {
        if (!close(base.slots[i], other.slots[i], rtol)) {
            return false;
        }
    }
    return true;
}

std::vector<DebtRecord> read_debts_csv(std::istream& in) {
    std::vector<DebtRecord> debts;
    std::string raw;
    std::size_t line = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = raw;
        if (line == 1 && text.starts_with("\xEF\xBB\xBF")) {
            text.remove_prefix(3);
        }
        text = trim(text);
        if (text.empty()) {
            continue;
        }
        if (!header_seen) {
            if (text != "id,amount,duration") {
                throw Error(ErrorKind::ParseError, kModule,
                            "line " + std::to_string(line) + ": expected header 'id,amount,duration'");
            }
            header_seen = true;
            continue;
        }

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = text.find(',', start);
            fields.push_back(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 3) {
            throw Error(ErrorKind::ParseError, kModule,
                        "line " + std::to_string(line) + ": expected 3 fields, found " +
                            std::to_string(fields.size()));
        }

        DebtRecord rec;
        rec.id = std::string(trim(fields[0]));
        rec.amount = parse_number(fields[1], line, "amount");
        rec.duration = parse_number(fields[2], line, "duration");
        if (!(rec.amount > 0.0)) {
            throw Error(ErrorKind::NonPositiveAmount, kModule,
                        "line " + std::to_string(line) + ": amount must be positive");
        }
        if (!(rec.duration > 0.0)) {
            throw Error(ErrorKind::NonPositiveDuration, kModule,
                        "line " + std::to_string(line) + ": duration must be positive");
        }
        debts.push_back(std::move(rec));
    }
    if (debts.empty()) {
        throw Error(ErrorKind::EmptyPortfolio, kModule, "CSV contains no debt records");
    }
    return debts;
}

std::vector<DebtRecord> load_debts_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, kModule, "cannot open '" + path.string() + "'");
    }
    return read_debts_csv(in);
}

}  // namespace debtcrit
