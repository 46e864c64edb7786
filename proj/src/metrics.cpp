#include "p2pctrl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace p2pctrl {

std::size_t steady_window_start(std::size_t length) {
    return length - std::max<std::size_t>(1, length / 5);
}

std::optional<Round> settling_round(std::span<const double> series, double band, std::size_t hold) {
    // Scan backwards tracking how long the in-band run starting at r is.
    std::size_t run = 0;
    std::optional<Round> best;
    for (std::size_t i = series.size(); i-- > 0;) {
        run = std::abs(series[i] - 1.0) <= band ? run + 1 : 0;
        if (run >= hold + 1) best = static_cast<Round>(i);
    }
    return best;
}

Metrics metrics(std::span<const double> series) {
    if (series.empty()) throw std::invalid_argument("metrics: empty history");

    Metrics m;
    m.series.assign(series.begin(), series.end());
    m.settling_round = settling_round(series);

    const auto window = series.subspan(steady_window_start(series.size()));
    double err = 0.0, sum = 0.0;
    for (double u : window) {
        err += std::abs(u - 1.0);
        sum += u;
    }
    const auto n = static_cast<double>(window.size());
    m.steady_state_error = err / n;
    m.steady_state_mean = sum / n;
    const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
    m.oscillation_amplitude = *hi - *lo;
    return m;
}

} // namespace p2pctrl
