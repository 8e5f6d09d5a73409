#include "bprt/cell.hpp"

#include "bprt/error.hpp"
#include "bprt/summation.hpp"

#include <cmath>

namespace bprt {

namespace {

void check_inputs(std::span<const double> x) {
    if (x.empty()) {
        throw InvalidInput("cell: empty input vector");
    }
    for (double v : x) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidInput("cell: inputs must be finite and nonnegative");
        }
    }
}

} // namespace

void CellParams::validate() const {
    if (!(w_h > 0.0) || !(w_l > 0.0) || !(w_0 > 0.0)) {
        throw InvalidInput("cell: conductances must be positive");
    }
    if (!std::isfinite(w_h) || !std::isfinite(w_l) || !std::isfinite(w_0)) {
        throw InvalidInput("cell: conductances must be finite");
    }
    if (!std::isfinite(t_a) || t_a < 0.0 || (mode == ThresholdMode::soft && t_a == 0.0)) {
        throw InvalidInput("cell: threshold t_a must be positive");
    }
    if (!(b > 1.0) || !(b1 > 1.0) || !std::isfinite(b) || !std::isfinite(b1)) {
        throw InvalidInput("cell: logistic steepness b and b1 must exceed 1");
    }
}

CellWeights assign_weights_hard(std::span<const double> x, double x_a, const CellParams& params) {
    check_inputs(x);
    if (!std::isfinite(x_a) || x_a < 0.0) {
        throw InvalidInput("cell: x_a must be finite and nonnegative");
    }
    CellWeights w;
    w.g.reserve(x.size());
    for (double v : x) {
        w.g.push_back(v > x_a ? params.w_h : params.w_l);
    }
    return w;
}

CellWeights assign_weights_soft(std::span<const double> x, double x_a, const CellParams& params) {
    check_inputs(x);
    if (x_a == 0.0) {
        throw SingularThreshold("cell: soft weight rule is singular at x_a = 0");
    }
    if (!std::isfinite(x_a) || x_a < 0.0) {
        throw InvalidInput("cell: x_a must be finite and positive");
    }
    const double log_b = std::log(params.b);
    CellWeights w;
    w.g.reserve(x.size());
    for (double v : x) {
        w.g.push_back(params.w_h / (1.0 + params.b * std::exp(-(v / x_a) * log_b)) + params.w_l);
    }
    return w;
}

CellWeights assign_weights(std::span<const double> x, double x_a, const CellParams& params) {
    return params.mode == ThresholdMode::hard ? assign_weights_hard(x, x_a, params)
                                              : assign_weights_soft(x, x_a, params);
}

double divider_output(std::span<const double> x, std::span<const double> w, const CellParams& params) {
    if (x.size() != w.size() || x.empty()) {
        throw InvalidInput("cell: input and weight vectors must be nonempty and of equal length");
    }
    CompensatedSum numerator;
    CompensatedSum denominator;
    denominator.add(params.w_0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        numerator.add(x[i] * w[i]);
        denominator.add(w[i]);
    }
    return numerator.value() / denominator.value();
}

double threshold_hard(double x0, const CellParams& params) { return x0 < params.t_a ? 1.0 : 0.0; }

double threshold_soft(double x0, const CellParams& params) {
    // b1 e^{-(x0/t_a) ln b1} / (1 + ...) is the logistic of z = (1 - x0/t_a) ln b1.
    const double z = (1.0 - x0 / params.t_a) * std::log(params.b1);
    return 1.0 / (1.0 + std::exp(-z));
}

CellOutput evaluate_cell(std::span<const double> x, std::span<const double> w, const CellParams& params) {
    const double x0 = divider_output(x, w, params);
    const double xout = params.mode == ThresholdMode::hard ? threshold_hard(x0, params) : threshold_soft(x0, params);
    return {x0, xout};
}

double merged_soft_output(std::span<const double> x, std::span<const double> w, const CellParams& params) {
    if (x.size() != w.size() || x.empty()) {
        throw InvalidInput("cell: input and weight vectors must be nonempty and of equal length");
    }
    CompensatedSum weighted;
    CompensatedSum total;
    total.add(params.w_0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        weighted.add(x[i] * w[i]);
        total.add(w[i]);
    }
    const double log_b1 = std::log(params.b1);
    const double beta = log_b1 / (params.t_a * total.value());
    // Written as a logistic in log space to avoid overflow of b1 e^{...}.
    const double z = log_b1 - beta * weighted.value();
    return 1.0 / (1.0 + std::exp(-z));
}

} // namespace bprt
