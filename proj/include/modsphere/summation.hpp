#pragma once

#include <cmath>

#if defined(__FAST_MATH__)
#error "compensated summation cannot survive -ffast-math; build without it"
#endif

namespace modsphere {

/**
 * Neumaier's variant of Kahan summation. The running compensation absorbs
 * whatever the main sum rounds away, including when a new term is larger
 * than the sum so far. value() = sum + carry.
 */
struct NeumaierSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }

    /// Fold in another accumulator: its sum first, then its carry.
    /// Merge order is part of the reproducibility contract.
    void merge(const NeumaierSum& o) {
        add(o.sum);
        add(o.carry);
    }

    double value() const { return sum + carry; }
};

}  // namespace modsphere
