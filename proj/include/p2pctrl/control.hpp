#pragma once

#include <cstddef>
#include <limits>

#include "p2pctrl/types.hpp"

namespace p2pctrl {

struct ControllerGains {
    double h_max = 0.0;       // worst-case static plant gain
    double w_n = 0.0;         // rad per round
    double k_p = 0.0;
    double k_i = 0.0;         // per round
    double gain_margin = 0.0;
    std::size_t dead_time_T = 1;

    bool operator==(const ControllerGains&) const = default;
};

// Closed-form PI tuning for a plant h_max * e^{-sT}. The crossover is placed
// where the dead time contributes -5π/6, the controller phase is fixed at -π/6
// and k_p leaves `gain_margin` of headroom at h_max.
// Throws std::invalid_argument unless every input is positive.
ControllerGains tune(double delta, std::size_t g_max, double r_min, double b_fes_min,
                     double gain_margin, std::size_t dead_time_T);

// U = C / B_max. Values above 1 mean the node receives more than it can use.
double utilization(double received, double b_max);

struct CommandLimits {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
};

struct PiStep {
    PiState state;
    double command = 0.0;
};

// One backward-Euler step of y = k_p (e + k_i ∫e). The output is clamped to
// `limits`; while clamped, the integral is held if the error pushes further
// into the limit.
PiStep pi_step(const PiState& state, double error, const ControllerGains& gains,
               double sample_period, CommandLimits limits = {});

// Upload capacity shared next round.
double actuate(double command_y, double delta, double upload_limit);

} // namespace p2pctrl
