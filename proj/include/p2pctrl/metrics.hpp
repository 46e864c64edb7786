#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "p2pctrl/types.hpp"

namespace p2pctrl {

inline constexpr double kSettlingBand = 0.05;
inline constexpr std::size_t kSettlingHold = 20; // rounds after entry that must stay in band

struct Metrics {
    std::optional<Round> settling_round; // index into the series; absent if never settled
    double steady_state_error = 0.0;     // mean |U-1| over the steady window
    double oscillation_amplitude = 0.0;  // max-min over the steady window
    double steady_state_mean = 0.0;
    std::vector<double> series;
};

// Start of the steady window: the final 20% of the series (at least one sample).
std::size_t steady_window_start(std::size_t length);

// First index r with |series[k]-1| <= band for every k in [r, r+hold].
std::optional<Round> settling_round(std::span<const double> series, double band = kSettlingBand,
                                    std::size_t hold = kSettlingHold);

// Throws std::invalid_argument on an empty series.
Metrics metrics(std::span<const double> series);

} // namespace p2pctrl
