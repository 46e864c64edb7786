#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "p2pctrl/types.hpp"

namespace p2pctrl {

struct BehaviorShare {
    BehaviorPolicy policy;
    double fraction = 1.0;

    bool operator==(const BehaviorShare&) const = default;
};

// From `round` on, every server's deliverable grants are multiplied by `scale`
// until the next entry takes over.
struct OverloadEntry {
    Round round = 0;
    double scale = 1.0;

    bool operator==(const OverloadEntry&) const = default;
};

struct ChurnEntry {
    Round round = 0;
    std::size_t departures = 0;
    std::size_t arrivals = 0;

    bool operator==(const ChurnEntry&) const = default;
};

struct ScenarioConfig {
    std::size_t n_nodes = 100;
    std::size_t rounds = 300;
    std::uint64_t seed = 1;
    double alpha = 0.5;
    std::size_t g_max = 2;
    double delta = 0.5;       // actuator step, Mb/s
    double b_fes_min = 2.0;   // smallest feasible link capacity, Mb/s
    double r_min = 0.01;
    double r_in_max = 0.01;
    double gain_margin = 10.0;
    std::size_t period_T = 1; // dead time in rounds

    double b_max = 0.05;                 // per-node max download capacity, Mb/s
    std::optional<double> upload_limit;  // unset: kDefaultUploadHeadroom * b_max
    std::size_t warmup_rounds = 10;
    bool adaptive_r_in = false;          // whitewashing rule on/off

    std::vector<BehaviorShare> behavior_mix{{behavior::Controlled{}, 1.0}};
    std::vector<OverloadEntry> overload_schedule;
    std::vector<ChurnEntry> churn_schedule;

    double effective_upload_limit() const;

    bool operator==(const ScenarioConfig&) const = default;
};

inline constexpr double kDefaultUploadHeadroom = 1.4;

ScenarioConfig default_config();

// Empty result means valid. Every violated invariant is reported.
std::vector<std::string> validate(const ScenarioConfig& config);

} // namespace p2pctrl
