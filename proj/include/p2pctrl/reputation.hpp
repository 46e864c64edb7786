#pragma once

#include <span>

#include "p2pctrl/types.hpp"

namespace p2pctrl {

// What a requester observed from one server in one round.
struct TrustSample {
    NodeId requester;
    NodeId server;
    double received = 0.0;  // Mb/s actually delivered
    double demanded = 0.0;  // Mb/s asked for, after the feasibility clamp
    Round round = 0;
};

// received / demanded. Throws std::domain_error when nothing was demanded.
double trust(const TrustSample& sample);

// Exponential moving average of the previous reputation and the mean trust the
// node earned this round: alpha * prev + (1 - alpha) * mean(trusts).
// A round in which the node served nobody leaves the reputation unchanged.
double update_reputation(double prev, std::span<const double> trusts, double alpha);

// Requesters below the threshold are refused service; the boundary is inclusive.
inline bool eligible(double reputation, double r_min) { return reputation >= r_min; }

} // namespace p2pctrl
