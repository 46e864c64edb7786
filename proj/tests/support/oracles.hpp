#pragma once

// Reference implementations that share no code with the library. They are
// slow and written for clarity.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

// Continuous filling: every active requester's grant grows at a rate equal to
// its reputation. Advance event by event until capacity is gone or everyone
// is satisfied.
inline std::vector<double> proportional_fill(double capacity, const std::vector<double>& demand,
                                             const std::vector<double>& rep, double r_min) {
    const std::size_t n = demand.size();
    std::vector<double> got(n, 0.0);
    std::vector<bool> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = rep[i] >= r_min && rep[i] > 0 && demand[i] > 0;

    double left = capacity;
    while (left > 0) {
        double rate = 0.0;
        double t_sat = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            if (active[i]) {
                rate += rep[i];
                t_sat = std::min(t_sat, (demand[i] - got[i]) / rep[i]);
            }
        if (rate == 0.0) break;
        const double t_cap = left / rate;
        if (t_cap <= t_sat) {
            for (std::size_t i = 0; i < n; ++i)
                if (active[i]) got[i] += rep[i] * t_cap;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            if ((demand[i] - got[i]) / rep[i] <= t_sat) {
                got[i] = demand[i];
                active[i] = false;
            } else {
                got[i] += rep[i] * t_sat;
            }
        }
        left -= rate * t_sat;
    }
    return got;
}

// Grants min(d_k, level * R_k) with the level found by bisection so the
// total matches min(capacity, total eligible demand).
inline std::vector<double> water_level(double capacity, const std::vector<double>& demand,
                                       const std::vector<double>& rep, double r_min) {
    const std::size_t n = demand.size();
    auto grants_at = [&](double level) {
        std::vector<double> g(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (rep[i] >= r_min && rep[i] > 0 && demand[i] > 0) g[i] = std::min(demand[i], level * rep[i]);
        return g;
    };
    auto total = [](const std::vector<double>& g) {
        double s = 0;
        for (double x : g) s += x;
        return s;
    };
    double lo = 0.0, hi = 1.0;
    while (total(grants_at(hi)) < capacity && hi < 1e300) {
        if (total(grants_at(hi)) == total(grants_at(hi * 2))) return grants_at(hi);
        hi *= 2;
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        (total(grants_at(mid)) < capacity ? lo : hi) = mid;
    }
    return grants_at(hi);
}

// TCP Reno steady-state throughput, written as window / (time per loss event
// scaled to per-packet): both terms expanded separately.
inline double reno_rate(double window, double rtt, double t0, double b, double p) {
    const double a = rtt * std::sqrt(2.0 * b * p / 3.0);
    double timeout_factor = 3.0 * std::sqrt(3.0 * b * p / 8.0);
    if (timeout_factor > 1.0) timeout_factor = 1.0;
    const double c = t0 * timeout_factor * (p + 32.0 * p * p * p);
    return window / (a + c);
}

// Published controller constants for delta=0.5, g_max=2, r_min=0.01,
// b_fes_min=2, margin 10, T=1.
inline constexpr double kReferenceKp = 3.4641e-3;
inline constexpr double kReferenceKi = 1.51149;
inline constexpr double kReferenceHmax = 25.0;

} // namespace oracle
