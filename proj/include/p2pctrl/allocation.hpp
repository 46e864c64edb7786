#pragma once

#include <span>
#include <vector>

#include "p2pctrl/types.hpp"

namespace p2pctrl {

struct Request {
    NodeId requester;
    double demanded = 0.0;   // Mb/s, already clamped to the feasible capacity
    double reputation = 0.0; // requester reputation from the previous round
};

struct AllocationResult {
    NodeId server;
    Round round = 0;
    std::vector<double> grants; // parallel to the request list

    double total() const;
};

// Reputation-weighted water filling of `capacity` over `requests`.
//
// Requesters below r_min get nothing and carry no weight. The rest are visited
// in non-decreasing demand/reputation order (ties broken by NodeId) and each
// receives min(demand, R_k * remaining / sum of remaining R). Equivalently,
// every active requester fills at a rate proportional to its reputation until
// it is satisfied or the capacity runs out.
AllocationResult water_fill(double capacity, std::span<const Request> requests, double r_min);

// Loss-based TCP Reno throughput approximation used to bound link demand.
struct FeasibleRateParams {
    double window_bytes = 0.0;   // M, max receiver window
    double rtt_s = 0.0;
    double timeout_s = 0.0;      // T0, retransmission timeout
    double packets_per_ack = 0.0;
    double loss_probability = 0.0; // must lie in (0,1)
};

// Bytes per second. Throws std::domain_error outside the parameter domain.
double feasible_rate(const FeasibleRateParams& params);

inline double clamp_demand(double demanded, double b_fes) {
    return demanded < b_fes ? demanded : b_fes;
}

// Overload factor implied by a grant: granted / (reputation * demanded).
// Lies in [0, 1/reputation] whenever granted <= demanded.
double realized_k_ovd(double granted, double reputation, double demanded);

} // namespace p2pctrl
