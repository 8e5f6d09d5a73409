#pragma once

#include <span>
#include <vector>

namespace bprt {

enum class ThresholdMode { hard, soft };

// Conductances are in siemens, voltages in volts. The defaults are the
// conductances 1/10 uS, 1/100 mS and 1/50 mS with a 0.5 V inverter threshold.
struct CellParams {
    double w_h = 1e-7;
    double w_l = 1e-5;
    double w_0 = 2e-5;
    double t_a = 0.5;
    double b = 100.0;   // logistic steepness of the soft weight rule
    double b1 = 100.0;  // logistic steepness of the soft threshold
    ThresholdMode mode = ThresholdMode::hard;

    // Hard mode accepts t_a = 0 (the degenerate "flag everything" threshold
    // used by ROC sweeps); soft mode needs t_a > 0.
    void validate() const;

    friend bool operator==(const CellParams&, const CellParams&) = default;
};

struct CellWeights {
    std::vector<double> g;
};

struct CellOutput {
    double x0;
    double xout;
};

// g_i = w_h if x_i > x_a, else w_l.
[[nodiscard]] CellWeights assign_weights_hard(std::span<const double> x, double x_a, const CellParams& params);

// g_i = w_h / (1 + b * exp(-(x_i / x_a) * ln b)) + w_l. Throws
// SingularThreshold for x_a == 0.
[[nodiscard]] CellWeights assign_weights_soft(std::span<const double> x, double x_a, const CellParams& params);

// Dispatches on params.mode.
[[nodiscard]] CellWeights assign_weights(std::span<const double> x, double x_a, const CellParams& params);

// x_0 = sum(x_i w_i) / (w_0 + sum(w_i)), both sums compensated.
[[nodiscard]] double divider_output(std::span<const double> x, std::span<const double> w, const CellParams& params);

[[nodiscard]] double threshold_hard(double x0, const CellParams& params);
[[nodiscard]] double threshold_soft(double x0, const CellParams& params);

[[nodiscard]] CellOutput evaluate_cell(std::span<const double> x, std::span<const double> w,
                                       const CellParams& params);

// Divider and soft threshold folded into one logistic in sum(x_i w_i):
//   b1 e^{-beta s} / (1 + b1 e^{-beta s}),  beta = ln b1 / (t_a (w_0 + sum w_i)).
[[nodiscard]] double merged_soft_output(std::span<const double> x, std::span<const double> w,
                                        const CellParams& params);

} // namespace bprt
