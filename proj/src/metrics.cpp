#include "bprt/metrics.hpp"

#include "bprt/error.hpp"

#include <cmath>
#include <limits>

namespace bprt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio(std::uint64_t num, std::uint64_t den) { return static_cast<double>(num) / static_cast<double>(den); }

double harmonic_mean(double a, double b) { return a + b == 0.0 ? 0.0 : 2.0 * a * b / (a + b); }

} // namespace

MetricsReport metrics_from_counts(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0) {
        throw UndefinedRate("sensitivity undefined: no positive (changed) samples", "positive");
    }
    if (c.tn + c.fp == 0) {
        throw UndefinedRate("specificity undefined: no negative (unchanged) samples", "negative");
    }

    MetricsReport r;
    r.sensitivity = ratio(c.tp, c.tp + c.fn);
    r.specificity = ratio(c.tn, c.tn + c.fp);
    r.false_positive_rate = ratio(c.fp, c.tn + c.fp);
    r.false_negative_rate = ratio(c.fn, c.tp + c.fn);
    r.youden = r.sensitivity + r.specificity - 1.0;
    r.precision = c.tp + c.fp == 0 ? 0.0 : ratio(c.tp, c.tp + c.fp);
    r.positive_likelihood = c.fp == 0 ? kInf : r.sensitivity / r.false_positive_rate;
    if (c.tn == 0) {
        throw UndefinedRate("negative likelihood undefined: specificity is 0", "negative");
    }
    r.negative_likelihood = r.false_negative_rate / r.specificity;
    r.f_measure = harmonic_mean(r.precision, r.sensitivity);
    r.accuracy = ratio(c.tp + c.tn, c.total());
    return r;
}

Composites composites_from_rates(double sens, double spec, double prec) {
    for (double v : {sens, spec, prec}) {
        if (!(v >= 0.0 && v <= 100.0)) {
            throw InvalidInput("rates must be percentages in [0, 100]");
        }
    }
    if (spec == 0.0) {
        throw UndefinedRate("negative likelihood undefined: specificity is 0", "negative");
    }
    Composites out{};
    out.youden = (sens + spec) / 100.0 - 1.0;
    out.positive_likelihood = spec == 100.0 ? kInf : sens / (100.0 - spec);
    out.negative_likelihood = (100.0 - sens) / spec;
    out.f_measure = harmonic_mean(prec, sens);
    return out;
}

} // namespace bprt
