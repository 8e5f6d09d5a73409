#pragma once

#include <cstdint>

namespace bprt {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    [[nodiscard]] std::uint64_t total() const { return tp + fp + tn + fn; }
};

// Rates are fractions. Likelihood ratios may be +infinity.
struct MetricsReport {
    double sensitivity = 0.0;
    double specificity = 0.0;
    double false_positive_rate = 0.0;
    double false_negative_rate = 0.0;
    double youden = 0.0;
    double precision = 0.0;
    double positive_likelihood = 0.0;
    double negative_likelihood = 0.0;
    double f_measure = 0.0;
    double accuracy = 0.0;
};

// Zero-denominator policy:
//   tp + fn == 0 or tn + fp == 0  -> UndefinedRate naming the empty class
//   specificity == 1              -> positive_likelihood = +inf
//   specificity == 0              -> UndefinedRate (negative likelihood)
//   tp + fp == 0                  -> precision = 0
//   precision + sensitivity == 0  -> f_measure = 0
[[nodiscard]] MetricsReport metrics_from_counts(const ConfusionCounts& counts);

struct Composites {
    double youden;
    double positive_likelihood;
    double negative_likelihood;
    double f_measure;  // percent
};

// Inputs in percent, as tabulated. Throws InvalidInput outside [0, 100] and
// UndefinedRate when specificity is 0.
[[nodiscard]] Composites composites_from_rates(double sensitivity_pct, double specificity_pct, double precision_pct);

} // namespace bprt
