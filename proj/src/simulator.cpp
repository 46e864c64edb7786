#include "p2pctrl/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "p2pctrl/config_io.hpp"
#include "p2pctrl/reputation.hpp"

namespace p2pctrl {

double RoundRecord::mean_utilization() const {
    if (nodes.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& n : nodes) sum += n.utilization;
    return sum / static_cast<double>(nodes.size());
}

double whitewash_update(const WhitewashStats& stats, double r_in_max) {
    if (stats.population == 0) throw std::invalid_argument("whitewash_update: empty population");
    const double w = static_cast<double>(std::min(stats.w_level, stats.population));
    return (1.0 - w / static_cast<double>(stats.population)) * r_in_max;
}

double behavior_apply(const BehaviorPolicy& policy, const NodeState& node, double command_y,
                      double delta) {
    const double instructed = actuate(command_y, delta, node.upload_limit);
    if (const auto* fr = std::get_if<behavior::FreeRider>(&policy))
        return fr->fraction * instructed;
    if (const auto* ra = std::get_if<behavior::FixedStepRA>(&policy)) {
        const double moved = node.commanded_upload + (node.utilization < 1.0 ? ra->step : -ra->step);
        return std::clamp(moved, 0.0, node.upload_limit);
    }
    return instructed; // Controlled, Whitewasher
}

namespace {

// Largest-remainder split of n over the mix fractions.
std::vector<std::size_t> apportion(std::size_t n, const std::vector<BehaviorShare>& mix) {
    std::vector<std::size_t> counts(mix.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < mix.size(); ++i) {
        const double exact = mix[i].fraction * static_cast<double>(n);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned)
        ++counts[remainders[k % remainders.size()].second];
    return counts;
}

} // namespace

World::World(ScenarioConfig config) : config_(std::move(config)), rng_(config_.seed) {
    if (auto problems = validate(config_); !problems.empty()) throw ConfigError(std::move(problems));

    r_in_current_ = config_.r_in_max;
    r_min_current_ = config_.r_min;
    gains_ = tune(config_.delta, config_.g_max, r_min_current_, config_.b_fes_min,
                  config_.gain_margin, config_.period_T);

    const auto counts = apportion(config_.n_nodes, config_.behavior_mix);
    for (std::size_t cohort = 0; cohort < counts.size(); ++cohort) {
        for (std::size_t k = 0; k < counts[cohort]; ++k) {
            const NodeId id{next_id_++};
            NodeState node;
            node.id = id;
            node.reputation = r_in_current_;
            node.b_max = config_.b_max;
            node.upload_limit = config_.effective_upload_limit();
            node.behavior = config_.behavior_mix[cohort].policy;
            node.cohort = cohort;
            node.joined_round = 0;
            node.upload_pipeline.assign(config_.period_T - 1, 0.0);
            reputations_.set(id, node.reputation);
            nodes_.emplace(id, std::move(node));
        }
    }
}

std::uint64_t World::uniform_index(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased and independent of the
    // standard library's distribution implementation.
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t x;
    do x = rng_();
    while (x >= limit);
    return x % n;
}

template <class T>
void World::shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[uniform_index(i)]);
}

double World::overload_scale(Round r) const {
    double scale = 1.0;
    Round best = -1;
    for (const auto& e : config_.overload_schedule)
        if (e.round <= r && e.round >= best) {
            best = e.round;
            scale = e.scale;
        }
    return scale;
}

void World::retune_if_changed(double new_r_min) {
    if (std::abs(new_r_min - r_min_current_) <= 1e-12) return;
    r_min_current_ = new_r_min;
    // A zero threshold would make the worst-case gain unbounded; keep the last gains.
    if (new_r_min > 0.0)
        gains_ = tune(config_.delta, config_.g_max, r_min_current_, config_.b_fes_min,
                      config_.gain_margin, config_.period_T);
}

void World::set_entry_threshold(double r_in) {
    if (!(r_in >= 0.0 && r_in <= 1.0)) throw std::invalid_argument("entry threshold out of [0,1]");
    r_in_current_ = r_in;
    retune_if_changed(r_in);
}

void World::set_reputation(NodeId id, double reputation) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw std::out_of_range("no live node " + to_string(id));
    it->second.reputation = reputation;
    reputations_.set(id, reputation);
}

std::vector<ServerRequests> World::generate_requests() {
    if (nodes_.size() < 2) throw std::runtime_error("no peers to request from");

    std::vector<NodeId> order;
    order.reserve(nodes_.size());
    for (const auto& [id, _] : nodes_) order.push_back(id);
    shuffle(order);

    const std::size_t n = order.size();
    const std::size_t g = std::min(config_.g_max, n - 1);
    std::vector<ServerRequests> out(n);
    for (std::size_t pos = 0; pos < n; ++pos) out[pos].server = order[pos];
    for (std::size_t pos = 0; pos < n; ++pos) {
        const NodeState& requester = nodes_.at(order[pos]);
        const double demand = clamp_demand(requester.b_max, config_.b_fes_min);
        for (std::size_t k = 1; k <= g; ++k)
            out[(pos + k) % n].requests.push_back(
                Request{requester.id, demand, reputations_.at(requester.id)});
    }
    std::sort(out.begin(), out.end(),
              [](const ServerRequests& a, const ServerRequests& b) { return a.server < b.server; });
    return out;
}

void World::step_controller(NodeState& node) {
    const double y_cap = node.upload_limit / config_.delta;
    const auto step = pi_step(node.controller, 1.0 - node.utilization, gains_, 1.0, {0.0, y_cap});
    node.controller = step.state;
    node.instructed_upload = actuate(step.command, config_.delta, node.upload_limit);
    node.commanded_upload = behavior_apply(node.behavior, node, step.command, config_.delta);
    node.upload_pipeline.push_back(node.commanded_upload);
    node.shared_upload = node.upload_pipeline.front();
    node.upload_pipeline.pop_front();
}

void World::run_round() {
    const Round r = round_;
    RoundRecord rec;
    rec.round = r;
    rec.overload_scale = overload_scale(r);
    rec.r_min = r_min_current_;

    const bool warmup = r < static_cast<Round>(config_.warmup_rounds);
    std::map<NodeId, double> received;
    for (const auto& [id, _] : nodes_) received[id] = 0.0;

    if (!warmup) {
        std::map<NodeId, std::vector<double>> trusts;
        for (const auto& sr : generate_requests()) {
            const NodeState& server = nodes_.at(sr.server);
            auto result = water_fill(server.shared_upload, sr.requests, r_min_current_);
            double granted = 0.0;
            for (std::size_t k = 0; k < sr.requests.size(); ++k) {
                const Request& req = sr.requests[k];
                const double grant = result.grants[k] * rec.overload_scale;
                granted += grant;
                received[req.requester] += grant;
                if (eligible(req.reputation, r_min_current_))
                    trusts[sr.server].push_back(
                        trust(TrustSample{req.requester, sr.server, grant, req.demanded, r}));
            }
            rec.total_granted += granted;
            rec.max_capacity_excess = std::max(rec.max_capacity_excess,
                                               granted - server.shared_upload * rec.overload_scale);
        }
        for (auto& [id, ts] : trusts) {
            NodeState& node = nodes_.at(id);
            node.reputation = update_reputation(node.reputation, ts, config_.alpha);
            reputations_.set(id, node.reputation);
        }
    }

    for (auto& [id, node] : nodes_) {
        node.received = received.at(id);
        rec.total_received += node.received;
        node.utilization = warmup ? 0.0 : utilization(node.received, node.b_max);
        step_controller(node);
        rec.nodes.push_back(NodeRecord{id, node.cohort, node.joined_round, node.utilization,
                                       node.shared_upload, node.reputation, node.received,
                                       node.instructed_upload});
    }

    apply_churn(r);
    rec.r_in = r_in_current_;
    history_.push_back(std::move(rec));
    ++round_;
}

void World::run(std::size_t rounds) {
    for (std::size_t i = 0; i < rounds; ++i) run_round();
}

void World::run_to_end() {
    while (round_ < static_cast<Round>(config_.rounds)) run_round();
}

std::size_t World::draw_cohort() {
    if (config_.behavior_mix.size() == 1) return 0;
    // 53 random bits mapped onto [0,1).
    const double x = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    double acc = 0.0;
    for (std::size_t i = 0; i < config_.behavior_mix.size(); ++i) {
        acc += config_.behavior_mix[i].fraction;
        if (x < acc) return i;
    }
    return config_.behavior_mix.size() - 1;
}

NodeId World::arrive(std::size_t cohort, Round joined) {
    const NodeId id{next_id_++};
    NodeState node;
    node.id = id;
    node.reputation = r_in_current_;
    node.b_max = config_.b_max;
    node.upload_limit = config_.effective_upload_limit();
    node.behavior = config_.behavior_mix.at(cohort).policy;
    node.cohort = cohort;
    node.joined_round = joined;
    node.upload_pipeline.assign(config_.period_T - 1, 0.0);
    // Prime the loop as if the newcomer had sat through one round with U = 0,
    // so its first round of service is not spent sharing nothing.
    step_controller(node);
    reputations_.set(id, node.reputation);
    nodes_.emplace(id, std::move(node));
    return id;
}

void World::depart(NodeId id) {
    nodes_.erase(id);
    reputations_.erase(id);
}

void World::churn(std::size_t departures, std::size_t arrivals) {
    std::vector<NodeId> live;
    for (const auto& [id, _] : nodes_) live.push_back(id);
    shuffle(live);
    departures = std::min(departures, live.size());
    for (std::size_t k = 0; k < departures; ++k) depart(live[k]);
    for (std::size_t k = 0; k < arrivals; ++k) arrive(draw_cohort(), round_);
}

void World::apply_churn(Round r) {
    WhitewashStats stats;
    stats.population = nodes_.size();
    auto leave = [&](NodeId id) {
        ++stats.departures;
        if (nodes_.at(id).reputation < r_in_current_) ++stats.suspect_departures;
        depart(id);
    };

    std::vector<NodeId> whitewashing;
    for (const auto& [id, node] : nodes_)
        if (std::holds_alternative<behavior::Whitewasher>(node.behavior) &&
            node.reputation < r_in_current_)
            whitewashing.push_back(id);
    for (NodeId id : whitewashing) {
        const auto delay = std::get<behavior::Whitewasher>(nodes_.at(id).behavior).rejoin_delay;
        pending_rejoins_.emplace(r + 1 + delay, nodes_.at(id).cohort);
        leave(id);
    }

    std::size_t arrivals = 0;
    for (const auto& e : config_.churn_schedule) {
        if (e.round != r) continue;
        std::vector<NodeId> live;
        for (const auto& [id, _] : nodes_) live.push_back(id);
        shuffle(live);
        const std::size_t d = std::min(e.departures, live.size());
        for (std::size_t k = 0; k < d; ++k) leave(live[k]);
        arrivals += e.arrivals;
    }
    stats.w_level = stats.suspect_departures;
    last_stats_ = stats;

    if (config_.adaptive_r_in && stats.population > 0) {
        r_in_current_ = whitewash_update(stats, config_.r_in_max);
        retune_if_changed(r_in_current_);
    }

    const Round joined = r + 1;
    for (std::size_t k = 0; k < arrivals; ++k) arrive(draw_cohort(), joined);
    auto [first, last] = pending_rejoins_.equal_range(joined);
    for (auto it = first; it != last; ++it) arrive(it->second, joined);
    pending_rejoins_.erase(first, last);
}

std::vector<double> mean_utilization_series(const std::vector<RoundRecord>& history,
                                            const std::function<bool(const NodeRecord&)>& keep) {
    std::vector<double> out;
    out.reserve(history.size());
    for (const auto& rec : history) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& n : rec.nodes)
            if (!keep || keep(n)) {
                sum += n.utilization;
                ++count;
            }
        if (count > 0) out.push_back(sum / static_cast<double>(count));
    }
    return out;
}

std::vector<double> cohort_series(const std::vector<RoundRecord>& history, std::size_t cohort) {
    return mean_utilization_series(history,
                                   [cohort](const NodeRecord& n) { return n.cohort == cohort; });
}

std::vector<double> newcomer_series(const std::vector<RoundRecord>& history, Round joined) {
    return mean_utilization_series(history,
                                   [joined](const NodeRecord& n) { return n.joined_round == joined; });
}

} // namespace p2pctrl
