#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "p2pctrl/control.hpp"

namespace p2pctrl {

// Sampled version of the loop h * e^{-sT} * k_p (1 + k_i/s). One step of the
// difference equation already spans one round, so with dead time T the buffer
// holds the T-1 commands still in flight: u[n+1] = h * y[n+1-T].
struct LinearLoopState {
    double u = 0.0;
    PiState pi;
    std::deque<double> delayed_command;
    double plant_gain_h = 0.0;
};

LinearLoopState make_linear_loop(double plant_gain_h, std::size_t dead_time_T, double u0 = 0.0);

// At rest on the reference: the integrator and every in-flight command hold
// y = reference / h.
LinearLoopState equilibrium_loop(const ControllerGains& gains, double plant_gain_h, double reference);

// The controller is unsaturated here so the loop stays exactly linear.
LinearLoopState linear_step(const LinearLoopState& state, double reference,
                            const ControllerGains& gains);

// u over `rounds` rounds starting from rest. During the first `warmup` rounds
// u is pinned at 0 while the controller keeps stepping, as in the simulator.
std::vector<double> simulate_linear(const ControllerGains& gains, double plant_gain_h,
                                    double reference, std::size_t rounds,
                                    std::size_t warmup = 0);

struct ComparisonReport {
    double steady_state_gap = 0.0;  // |mean(linear - full)| over the final 20%
    double transient_max_gap = 0.0; // max |linear - full| before that window
    std::optional<Round> linear_settling;
    std::optional<Round> full_settling;
};

// Throws std::invalid_argument when the series differ in length or are empty.
ComparisonReport compare_trajectories(std::span<const double> linear, std::span<const double> full);

} // namespace p2pctrl
