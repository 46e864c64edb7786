#include "p2pctrl/control.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace p2pctrl {

ControllerGains tune(double delta, std::size_t g_max, double r_min, double b_fes_min,
                     double gain_margin, std::size_t dead_time_T) {
    if (!(delta > 0.0) || g_max == 0 || !(r_min > 0.0) || !(b_fes_min > 0.0) ||
        !(gain_margin > 0.0) || dead_time_T == 0)
        throw std::invalid_argument("tune: all inputs must be positive");

    constexpr double pi = std::numbers::pi;
    const double T = static_cast<double>(dead_time_T);

    ControllerGains g;
    g.h_max = delta * static_cast<double>(g_max) / (2.0 * r_min * b_fes_min);
    g.w_n = 5.0 * pi / (6.0 * T);
    g.k_i = g.w_n * std::tan(pi / 6.0);
    g.k_p = std::cos(pi / 6.0) / (g.h_max * gain_margin);
    g.gain_margin = gain_margin;
    g.dead_time_T = dead_time_T;
    return g;
}

double utilization(double received, double b_max) {
    if (!(b_max > 0.0)) throw std::invalid_argument("utilization: b_max must be positive");
    return received / b_max;
}

PiStep pi_step(const PiState& state, double error, const ControllerGains& gains,
               double sample_period, CommandLimits limits) {
    if (!(sample_period > 0.0)) throw std::invalid_argument("pi_step: sample_period must be positive");

    auto law = [&](double integral) { return gains.k_p * (error + gains.k_i * integral); };

    double integral = state.integral_accum + error * sample_period;
    double y = law(integral);
    if (y > limits.upper) {
        if (error > 0.0) integral = state.integral_accum;
        y = limits.upper;
    } else if (y < limits.lower) {
        if (error < 0.0) integral = state.integral_accum;
        y = limits.lower;
    }
    return {PiState{integral, y}, y};
}

double actuate(double command_y, double delta, double upload_limit) {
    return std::min(command_y * delta, upload_limit);
}

} // namespace p2pctrl
