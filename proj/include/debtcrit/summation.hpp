#pragma once

#include <cmath>

namespace debtcrit {

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays exact
/// when an addend is larger in magnitude than the running sum.
template <typename Real>
class CompensatedSum {
public:
    void add(Real value) noexcept {
        const Real t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(Real value) noexcept {
        add(value);
        return *this;
    }

    Real value() const noexcept { return sum_ + compensation_; }

private:
    Real sum_{0};
    Real compensation_{0};
};

}  // namespace debtcrit
