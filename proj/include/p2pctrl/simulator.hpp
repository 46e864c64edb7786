#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "p2pctrl/allocation.hpp"
#include "p2pctrl/config.hpp"
#include "p2pctrl/control.hpp"
#include "p2pctrl/types.hpp"

namespace p2pctrl {

struct NodeRecord {
    NodeId id;
    std::size_t cohort = 0;
    Round joined_round = 0;
    double utilization = 0.0;
    double shared_upload = 0.0;     // what the node will serve next round
    double reputation = 0.0;        // after this round's update
    double received = 0.0;
    double instructed_upload = 0.0;
};

struct RoundRecord {
    Round round = 0;
    std::vector<NodeRecord> nodes; // one per node live during the round, by id
    double total_granted = 0.0;
    double total_received = 0.0;
    double max_capacity_excess = 0.0; // max over servers of granted - shared*scale
    double overload_scale = 1.0;
    double r_in = 0.0;
    double r_min = 0.0;

    double mean_utilization() const;
};

struct WhitewashStats {
    std::size_t departures = 0;
    std::size_t suspect_departures = 0; // left with reputation below r_in
    std::size_t w_level = 0;
    std::size_t population = 0;
};

// (1 - W/N) * r_in_max. Throws std::invalid_argument for an empty population.
double whitewash_update(const WhitewashStats& stats, double r_in_max);

struct ServerRequests {
    NodeId server;
    std::vector<Request> requests;
};

// Next round's shared upload for a node whose controller produced `command_y`.
// `node.utilization` must already hold this round's measurement and
// `node.commanded_upload` the policy's previous output.
double behavior_apply(const BehaviorPolicy& policy, const NodeState& node, double command_y,
                      double delta);

class World {
public:
    // Throws ConfigError when the configuration does not validate.
    explicit World(ScenarioConfig config);

    void run_round();
    void run(std::size_t rounds);
    void run_to_end(); // until config().rounds rounds have been played

    // Every live node picks min(g_max, N-1) distinct peers. The picks follow a
    // fresh uniformly random cyclic order, each node asking its successors, so
    // every peer is equally likely to be chosen and every server gets the
    // same number of requests. Throws std::runtime_error with fewer than 2 nodes.
    std::vector<ServerRequests> generate_requests();

    // Scripting hooks used by experiments and tests.
    void set_entry_threshold(double r_in); // r_in = r_min = value, gains retuned
    void set_reputation(NodeId id, double reputation);
    void churn(std::size_t departures, std::size_t arrivals);

    const ScenarioConfig& config() const { return config_; }
    const std::map<NodeId, NodeState>& nodes() const { return nodes_; }
    const GlobalReputationTable& reputations() const { return reputations_; }
    const ControllerGains& gains() const { return gains_; }
    const std::vector<RoundRecord>& history() const { return history_; }
    const WhitewashStats& last_whitewash_stats() const { return last_stats_; }
    Round round() const { return round_; }
    double r_in_current() const { return r_in_current_; }
    double r_min_current() const { return r_min_current_; }

private:
    std::uint64_t uniform_index(std::uint64_t n);
    template <class T>
    void shuffle(std::vector<T>& items);

    double overload_scale(Round r) const;
    void retune_if_changed(double new_r_min);
    NodeId arrive(std::size_t cohort, Round joined);
    void depart(NodeId id);
    std::size_t draw_cohort();
    void step_controller(NodeState& node);
    void apply_churn(Round r);

    ScenarioConfig config_;
    ControllerGains gains_;
    std::map<NodeId, NodeState> nodes_;
    GlobalReputationTable reputations_;
    std::mt19937_64 rng_;
    Round round_ = 0;
    double r_in_current_ = 0.0;
    double r_min_current_ = 0.0;
    std::uint64_t next_id_ = 0;
    std::multimap<Round, std::size_t> pending_rejoins_; // round -> cohort
    WhitewashStats last_stats_;
    std::vector<RoundRecord> history_;
};

// Mean U per round over nodes accepted by `keep`; rounds where no node
// qualifies are skipped.
std::vector<double> mean_utilization_series(
    const std::vector<RoundRecord>& history,
    const std::function<bool(const NodeRecord&)>& keep = {});

std::vector<double> cohort_series(const std::vector<RoundRecord>& history, std::size_t cohort);

// Mean U of the nodes that joined at `joined`, from that round on.
std::vector<double> newcomer_series(const std::vector<RoundRecord>& history, Round joined);

} // namespace p2pctrl
