#include "p2pctrl/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "p2pctrl/reputation.hpp"

namespace p2pctrl {

double AllocationResult::total() const {
    return std::accumulate(grants.begin(), grants.end(), 0.0);
}

AllocationResult water_fill(double capacity, std::span<const Request> requests, double r_min) {
    AllocationResult result;
    result.grants.assign(requests.size(), 0.0);

    std::vector<std::size_t> order;
    order.reserve(requests.size());
    double weight = 0.0;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const auto& r = requests[i];
        if (eligible(r.reputation, r_min) && r.reputation > 0.0 && r.demanded > 0.0) {
            order.push_back(i);
            weight += r.reputation;
        }
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ka = requests[a].demanded / requests[a].reputation;
        const double kb = requests[b].demanded / requests[b].reputation;
        if (ka != kb) return ka < kb;
        return requests[a].requester < requests[b].requester;
    });

    double remaining = std::max(capacity, 0.0);
    for (std::size_t i : order) {
        if (remaining <= 0.0 || weight <= 0.0) break;
        const auto& r = requests[i];
        const double fair = r.reputation * remaining / weight;
        const double grant = std::min({r.demanded, fair, remaining});
        result.grants[i] = grant;
        remaining -= grant;
        weight -= r.reputation;
    }
    return result;
}

double feasible_rate(const FeasibleRateParams& p) {
    const double loss = p.loss_probability;
    if (!(loss > 0.0)) throw std::domain_error("formula undefined for loss <= 0; clamp upstream");
    if (!(loss < 1.0)) throw std::domain_error("loss probability must be below 1");
    if (!(p.window_bytes > 0.0 && p.rtt_s > 0.0 && p.timeout_s > 0.0 && p.packets_per_ack > 0.0))
        throw std::domain_error("feasible-rate parameters must be positive");

    const double b = p.packets_per_ack;
    const double fast_retransmit = p.rtt_s * std::sqrt(2.0 * b * loss / 3.0);
    const double timeouts = p.timeout_s * std::min(1.0, 3.0 * std::sqrt(3.0 * b * loss / 8.0)) *
                            loss * (1.0 + 32.0 * loss * loss);
    return p.window_bytes / (fast_retransmit + timeouts);
}

double realized_k_ovd(double granted, double reputation, double demanded) {
    if (!(reputation > 0.0)) throw std::domain_error("ineligible node has no overload factor");
    if (!(demanded > 0.0)) throw std::domain_error("no demand, overload factor undefined");
    return granted / (reputation * demanded);
}

} // namespace p2pctrl
