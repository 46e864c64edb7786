#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <variant>

namespace p2pctrl {

// Rounds are signed so that "before the first round" can be expressed as -1.
using Round = std::int64_t;

struct NodeId {
    std::uint64_t value = 0;

    auto operator<=>(const NodeId&) const = default;
};

std::string to_string(NodeId id);

// Integrator state of the per-node PI controller.
struct PiState {
    double integral_accum = 0.0;
    double last_output_y = 0.0;

    bool operator==(const PiState&) const = default;
};

namespace behavior {

// Follows the controller: shares actuate(y).
struct Controlled {
    bool operator==(const Controlled&) const = default;
};

// Shares only `fraction` of what the controller instructs.
struct FreeRider {
    double fraction = 1.0;
    bool operator==(const FreeRider&) const = default;
};

// Baseline allocator: moves its shared upload by a constant step each round,
// up while under-served and down otherwise. Ignores the controller.
struct FixedStepRA {
    double step = 0.5;
    bool operator==(const FixedStepRA&) const = default;
};

// Shares like Controlled, but sheds its identity whenever its reputation
// drops below the newcomer reputation, rejoining after `rejoin_delay` rounds.
struct Whitewasher {
    std::int64_t rejoin_delay = 0;
    bool operator==(const Whitewasher&) const = default;
};

} // namespace behavior

using BehaviorPolicy = std::variant<behavior::Controlled, behavior::FreeRider,
                                    behavior::FixedStepRA, behavior::Whitewasher>;

// Canonical text form: controlled, freerider(0.5), fixedstep(0.5), whitewasher(5).
std::string to_string(const BehaviorPolicy& policy);

// Inverse of to_string; throws std::invalid_argument on malformed text.
BehaviorPolicy parse_behavior(const std::string& text);

struct NodeState {
    NodeId id;
    double reputation = 0.0;
    double b_max = 0.0;             // max download capacity, Mb/s
    double upload_limit = 0.0;      // ceiling on shared upload, Mb/s
    double shared_upload = 0.0;     // capacity served this round, Mb/s
    double commanded_upload = 0.0;  // last behaviour output (effective after the dead time)
    double instructed_upload = 0.0; // actuate(y) before the behaviour policy
    double utilization = 0.0;       // last measured U
    double received = 0.0;          // last measured C
    PiState controller;
    BehaviorPolicy behavior = behavior::Controlled{};
    std::size_t cohort = 0;         // index into ScenarioConfig::behavior_mix
    Round joined_round = 0;
    std::deque<double> upload_pipeline; // commands waiting out the dead time
};

// One reputation view shared by every peer; stands in for the aggregated
// tables that a gossip protocol would converge to.
class GlobalReputationTable {
public:
    void set(NodeId id, double reputation);
    void erase(NodeId id);
    bool contains(NodeId id) const;
    double at(NodeId id) const;
    std::size_t size() const { return entries_.size(); }

    const std::map<NodeId, double>& entries() const { return entries_; }

private:
    std::map<NodeId, double> entries_;
};

} // namespace p2pctrl
