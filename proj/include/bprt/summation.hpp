#pragma once

#include <cmath>
#include <span>

namespace bprt {

// Neumaier (improved Kahan) accumulator. The compensated total is exact to
// within one rounding for well-conditioned sums, so reordering the addends
// changes the result by at most an ulp.
class CompensatedSum {
public:
    void add(double value) {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

[[nodiscard]] inline double compensated_sum(std::span<const double> values) {
    CompensatedSum acc;
    for (double v : values) {
        acc.add(v);
    }
    return acc.value();
}

} // namespace bprt
