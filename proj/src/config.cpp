#include "p2pctrl/config.hpp"

#include <cmath>
#include <stdexcept>

#include "text.hpp"

namespace p2pctrl {

std::string to_string(NodeId id) { return std::to_string(id.value); }

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

std::string to_string(const BehaviorPolicy& policy) {
    return std::visit(
        overloaded{
            [](const behavior::Controlled&) { return std::string("controlled"); },
            [](const behavior::FreeRider& p) {
                return "freerider(" + detail::shortest(p.fraction) + ")";
            },
            [](const behavior::FixedStepRA& p) {
                return "fixedstep(" + detail::shortest(p.step) + ")";
            },
            [](const behavior::Whitewasher& p) {
                return "whitewasher(" + std::to_string(p.rejoin_delay) + ")";
            },
        },
        policy);
}

BehaviorPolicy parse_behavior(const std::string& raw) {
    const std::string_view text = detail::trim(raw);
    if (text == "controlled") return behavior::Controlled{};

    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')')
        throw std::invalid_argument("unknown behavior '" + std::string(text) + "'");
    const auto name = text.substr(0, open);
    const auto arg = text.substr(open + 1, text.size() - open - 2);

    if (name == "whitewasher") {
        auto delay = detail::parse_number<std::int64_t>(arg);
        if (!delay || *delay < 0)
            throw std::invalid_argument("whitewasher needs a non-negative rejoin delay");
        return behavior::Whitewasher{*delay};
    }
    auto value = detail::parse_number<double>(arg);
    if (!value) throw std::invalid_argument("bad argument in '" + std::string(text) + "'");
    if (name == "freerider") return behavior::FreeRider{*value};
    if (name == "fixedstep") return behavior::FixedStepRA{*value};
    throw std::invalid_argument("unknown behavior '" + std::string(text) + "'");
}

void GlobalReputationTable::set(NodeId id, double reputation) { entries_[id] = reputation; }

void GlobalReputationTable::erase(NodeId id) { entries_.erase(id); }

bool GlobalReputationTable::contains(NodeId id) const { return entries_.contains(id); }

double GlobalReputationTable::at(NodeId id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw std::out_of_range("no reputation for node " + to_string(id));
    return it->second;
}

double ScenarioConfig::effective_upload_limit() const {
    return upload_limit.value_or(kDefaultUploadHeadroom * b_max);
}

ScenarioConfig default_config() { return ScenarioConfig{}; }

std::vector<std::string> validate(const ScenarioConfig& c) {
    std::vector<std::string> errors;
    auto require = [&](bool ok, std::string message) {
        if (!ok) errors.push_back(std::move(message));
    };

    require(c.n_nodes >= 1, "n_nodes must be at least 1");
    require(std::isfinite(c.alpha) && c.alpha >= 0.0 && c.alpha <= 1.0, "alpha out of [0,1]");
    require(c.g_max >= 1, "g_max must be at least 1");
    require(positive_finite(c.delta), "delta must be a positive bandwidth");
    require(positive_finite(c.b_fes_min), "b_fes_min must be a positive bandwidth");
    require(positive_finite(c.b_max), "b_max must be a positive bandwidth");
    if (c.upload_limit)
        require(positive_finite(*c.upload_limit), "upload_limit must be a positive bandwidth");
    require(std::isfinite(c.r_min) && c.r_min > 0.0 && c.r_min <= 1.0, "r_min out of (0,1]");
    require(std::isfinite(c.r_in_max) && c.r_in_max >= 0.0 && c.r_in_max <= 1.0,
            "r_in_max out of [0,1]");
    require(positive_finite(c.gain_margin), "gain_margin must be positive");
    require(c.period_T >= 1, "period_T must be at least 1 round");

    if (c.behavior_mix.empty()) {
        errors.push_back("behavior_mix is empty");
    } else {
        double sum = 0.0;
        for (const auto& share : c.behavior_mix) {
            const std::string label = to_string(share.policy);
            require(std::isfinite(share.fraction) && share.fraction >= 0.0,
                    "behavior_mix fraction for " + label + " must be non-negative");
            sum += share.fraction;
            if (auto* fr = std::get_if<behavior::FreeRider>(&share.policy))
                require(std::isfinite(fr->fraction) && fr->fraction >= 0.0 && fr->fraction <= 1.0,
                        "free-rider fraction out of [0,1]");
            if (auto* ra = std::get_if<behavior::FixedStepRA>(&share.policy))
                require(positive_finite(ra->step), "fixed step must be positive");
            if (auto* ww = std::get_if<behavior::Whitewasher>(&share.policy))
                require(ww->rejoin_delay >= 0, "whitewasher rejoin delay must be non-negative");
        }
        require(std::abs(sum - 1.0) <= 1e-9,
                "behavior_mix fractions sum to " + detail::shortest(sum) + ", expected 1");
    }

    for (const auto& entry : c.overload_schedule) {
        require(entry.round >= 0, "overload round must be non-negative");
        require(std::isfinite(entry.scale) && entry.scale >= 0.0 && entry.scale <= 1.0,
                "overload scale out of [0,1]");
    }
    for (const auto& entry : c.churn_schedule)
        require(entry.round >= 0, "churn round must be non-negative");

    return errors;
}

} // namespace p2pctrl
