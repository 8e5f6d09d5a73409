#include "bprt/memristor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bprt {

namespace {

constexpr double kGrowBelow = 0.05;
constexpr double kShrinkAbove = 0.25;

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

double memristance_at(const MemristorParams& p, double x) { return p.r_on * x + p.r_off * (1.0 - x); }

// Stage arguments are clamped so M stays inside [r_on, r_off] even when an
// intermediate RK4 stage overshoots a rail.
double drift(const MemristorParams& p, double k, double v, double x) {
    return k * v / memristance_at(p, clamp_unit(x));
}

} // namespace

void MemristorParams::validate() const {
    if (!(r_on > 0.0) || !(r_off > r_on) || !std::isfinite(r_off)) {
        throw InvalidInput("memristor: require 0 < r_on < r_off");
    }
    if (!(d > 0.0) || !(mu_v > 0.0) || !std::isfinite(d) || !std::isfinite(mu_v)) {
        throw InvalidInput("memristor: thickness and mobility must be positive");
    }
}

void PulseSpec::validate() const {
    if (!std::isfinite(amplitude) || amplitude == 0.0) {
        throw InvalidInput("pulse: amplitude must be finite and nonzero");
    }
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw InvalidInput("pulse: width must be positive");
    }
    if (max_pulses < 1) {
        throw InvalidInput("pulse: max_pulses must be at least 1");
    }
    if (!(tolerance > 0.0 && tolerance < 1.0)) {
        throw InvalidInput("pulse: tolerance must lie in (0, 1)");
    }
}

double memristance(const MemristorState& state) { return memristance_at(state.params, state.x); }

MemristorState step(const MemristorState& state, double v, double dt) {
    if (!std::isfinite(v) || !std::isfinite(dt)) {
        throw InvalidInput("memristor step: non-finite voltage or time step");
    }
    if (!(dt > 0.0)) {
        throw InvalidInput("memristor step: dt must be positive");
    }
    if (v == 0.0) {
        return state;
    }

    const MemristorParams& p = state.params;
    const double k = p.drift_coefficient();
    const double h = dt / kSubstepsPerStep;

    double x = state.x;
    for (int i = 0; i < kSubstepsPerStep; ++i) {
        const double k1 = drift(p, k, v, x);
        const double k2 = drift(p, k, v, x + 0.5 * h * k1);
        const double k3 = drift(p, k, v, x + 0.5 * h * k2);
        const double k4 = drift(p, k, v, x + h * k3);
        x = clamp_unit(x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }

    MemristorState next = state;
    next.x = x;
    return next;
}

double state_for_conductance(const MemristorParams& params, double g) {
    const double m = 1.0 / g;
    return clamp_unit((params.r_off - m) / (params.r_off - params.r_on));
}

ProgrammingResult program_to_conductance(const MemristorState& state, double target_g, const PulseSpec& pulse) {
    state.params.validate();
    pulse.validate();

    const double g_min = 1.0 / state.params.r_off;
    const double g_max = 1.0 / state.params.r_on;
    if (!std::isfinite(target_g) || target_g < g_min || target_g > g_max) {
        throw RangeError("target conductance " + std::to_string(target_g) + " S outside [" +
                         std::to_string(g_min) + ", " + std::to_string(g_max) + "] S");
    }

    const double band = pulse.tolerance * target_g;
    const double amplitude = std::abs(pulse.amplitude);

    ProgrammingResult result{state, {}};
    double width = pulse.width;
    int last_direction = 0;
    bool locked = false;
    double previous_g = conductance(result.state);

    for (std::size_t n = 0; n < pulse.max_pulses; ++n) {
        const double g = conductance(result.state);
        if (std::abs(g - target_g) <= band) {
            return result;
        }

        const int direction = g < target_g ? 1 : -1;
        if (last_direction != 0) {
            const double relative_change = std::abs(g - previous_g) / previous_g;
            if (direction != last_direction) {
                width *= 0.5;
                locked = true;
            } else if (relative_change > kShrinkAbove) {
                width *= 0.5;
            } else if (!locked && relative_change < kGrowBelow) {
                width *= 2.0;
            }
        }

        previous_g = g;
        const double v = direction * amplitude;
        result.state = step(result.state, v, width);
        result.pulses.push_back({v, width});
        last_direction = direction;
    }

    if (std::abs(conductance(result.state) - target_g) <= band) {
        return result;
    }
    throw NonConvergence("memristor programming did not converge within " + std::to_string(pulse.max_pulses) +
                             " pulses",
                         result.state, result.pulses.size());
}

} // namespace bprt
