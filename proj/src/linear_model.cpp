#include "p2pctrl/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "p2pctrl/metrics.hpp"

namespace p2pctrl {

namespace {

constexpr CommandLimits kUnbounded{-std::numeric_limits<double>::infinity(),
                                   std::numeric_limits<double>::infinity()};

std::size_t buffer_length(std::size_t dead_time_T) {
    if (dead_time_T == 0) throw std::invalid_argument("dead time must be at least one round");
    return dead_time_T - 1;
}

} // namespace

LinearLoopState make_linear_loop(double plant_gain_h, std::size_t dead_time_T, double u0) {
    LinearLoopState s;
    s.u = u0;
    s.plant_gain_h = plant_gain_h;
    s.delayed_command.assign(buffer_length(dead_time_T), 0.0);
    return s;
}

LinearLoopState equilibrium_loop(const ControllerGains& gains, double plant_gain_h, double reference) {
    auto s = make_linear_loop(plant_gain_h, gains.dead_time_T, reference);
    const double y = reference / plant_gain_h;
    std::fill(s.delayed_command.begin(), s.delayed_command.end(), y);
    s.pi = PiState{y / (gains.k_p * gains.k_i), y};
    return s;
}

LinearLoopState linear_step(const LinearLoopState& state, double reference,
                            const ControllerGains& gains) {
    LinearLoopState next = state;
    const auto step = pi_step(state.pi, reference - state.u, gains, 1.0, kUnbounded);
    next.pi = step.state;
    next.delayed_command.push_back(step.command);
    const double applied = next.delayed_command.front();
    next.delayed_command.pop_front();
    next.u = state.plant_gain_h * applied;
    return next;
}

std::vector<double> simulate_linear(const ControllerGains& gains, double plant_gain_h,
                                    double reference, std::size_t rounds, std::size_t warmup) {
    std::vector<double> out;
    out.reserve(rounds);
    auto s = make_linear_loop(plant_gain_h, gains.dead_time_T);
    for (std::size_t r = 0; r < rounds; ++r) {
        if (r < warmup) s.u = 0.0;
        out.push_back(s.u);
        s = linear_step(s, reference, gains);
    }
    return out;
}

ComparisonReport compare_trajectories(std::span<const double> linear, std::span<const double> full) {
    if (linear.size() != full.size())
        throw std::invalid_argument("compare_trajectories: series lengths differ (" +
                                    std::to_string(linear.size()) + " vs " +
                                    std::to_string(full.size()) + ")");
    if (linear.empty()) throw std::invalid_argument("compare_trajectories: empty series");

    ComparisonReport rep;
    const std::size_t start = steady_window_start(linear.size());
    double diff = 0.0;
    for (std::size_t i = start; i < linear.size(); ++i) diff += linear[i] - full[i];
    rep.steady_state_gap = std::abs(diff / static_cast<double>(linear.size() - start));
    for (std::size_t i = 0; i < start; ++i)
        rep.transient_max_gap = std::max(rep.transient_max_gap, std::abs(linear[i] - full[i]));
    rep.linear_settling = settling_round(linear);
    rep.full_settling = settling_round(full);
    return rep;
}

} // namespace p2pctrl
