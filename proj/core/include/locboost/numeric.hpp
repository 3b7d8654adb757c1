#pragma once

#include <cmath>

namespace locboost {

// Neumaier compensated accumulator. Loss bookkeeping adds and removes many
// exponential terms of mixed magnitude; the compensation keeps the running
// sums usable as drift-free weights over a full training run.
struct CompensatedSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }

    void subtract(double v) { add(-v); }

    double value() const { return sum + compensation; }

    void reset() {
        sum = 0.0;
        compensation = 0.0;
    }
};

inline double clamp_to(double v, double lo, double hi) {
    if (v < lo) return lo;
    if (v > hi) return hi;
    return v;
}

} // namespace locboost
