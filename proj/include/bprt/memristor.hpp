#pragma once

#include "bprt/error.hpp"

#include <cstddef>
#include <vector>

namespace bprt {

// Linear ion-drift memristor (Strukov et al. 2008) with hard boundary clamping.
//
//   M(x)  = r_on * x + r_off * (1 - x)
//   dx/dt = mu_v * r_on / d^2 * v / M(x)
//
// x is the doped-region width normalised by the device thickness. Positive
// drive voltage grows the doped region, i.e. lowers the memristance.
struct MemristorParams {
    double r_on = 1e4;    // ohms, fully doped
    double r_off = 1e8;   // ohms, fully undoped
    double d = 10e-9;     // meters
    double mu_v = 1e-14;  // m^2 s^-1 V^-1

    // Throws InvalidInput unless 0 < r_on < r_off, d > 0, mu_v > 0.
    void validate() const;

    // mu_v * r_on / d^2, the drift coefficient in ohm / (V s).
    [[nodiscard]] double drift_coefficient() const { return mu_v * r_on / (d * d); }
};

struct MemristorState {
    double x = 0.0;
    MemristorParams params{};
};

// Width is the initial pulse width; the programmer adapts it (see
// program_to_conductance). Amplitude sign is chosen per pulse.
struct PulseSpec {
    double amplitude = 1.0;       // volts, magnitude used for both polarities
    double width = 10e-9;         // seconds
    std::size_t max_pulses = 1'000'000;
    double tolerance = 0.01;      // relative

    void validate() const;
};

// RK4 sub-steps taken inside a single call to step().
inline constexpr int kSubstepsPerStep = 100;

[[nodiscard]] double memristance(const MemristorState& state);
[[nodiscard]] inline double conductance(const MemristorState& state) { return 1.0 / memristance(state); }

// Holds `v` across the device for `dt` seconds. Integrates with
// kSubstepsPerStep RK4 sub-steps, clamping x to [0, 1] after each.
[[nodiscard]] MemristorState step(const MemristorState& state, double v, double dt);

// Inverse of memristance() on [r_on, r_off].
[[nodiscard]] double state_for_conductance(const MemristorParams& params, double g);

struct AppliedPulse {
    double amplitude;  // signed volts
    double width;      // seconds
};

struct ProgrammingResult {
    MemristorState state;
    std::vector<AppliedPulse> pulses;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, MemristorState final_state, std::size_t pulses)
        : Error(what), final_state_(final_state), pulses_(pulses) {}

    [[nodiscard]] const MemristorState& final_state() const { return final_state_; }
    [[nodiscard]] std::size_t pulses_applied() const { return pulses_; }

private:
    MemristorState final_state_;
    std::size_t pulses_;
};

// Write-verify programming. Before each pulse the conductance is read; the
// loop stops once |G - target| <= tolerance * target. Each pulse takes the
// polarity that moves G toward the target. The width starts at pulse.width,
// doubles while successive reads show less than 5% relative change, halves
// when a pulse changed G by more than 25% or overshot the target, and never
// grows again after the first overshoot.
//
// Throws RangeError if target is outside [1/r_off, 1/r_on] and
// NonConvergence (carrying the final state) if max_pulses run out.
[[nodiscard]] ProgrammingResult program_to_conductance(const MemristorState& state, double target_g,
                                                       const PulseSpec& pulse);

} // namespace bprt
