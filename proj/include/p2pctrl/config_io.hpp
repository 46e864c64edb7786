#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "p2pctrl/config.hpp"

namespace p2pctrl {

// Thrown for unreadable files, syntax errors, unknown keys and failed validation.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);

    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

// Grammar, one entry per line, '#' starts a comment:
//
//   key = value
//   behavior_mix = controlled:0.75, freerider(0.5):0.25
//   overload     = 120:0.5, 150:1
//   churn        = 200:10:10          (round:departures:arrivals)
//
// Keys not present keep their default_config() value. The result is validated.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config(const std::filesystem::path& path);

// Emits every key, so parse_config_text(to_config_text(c)) == c.
std::string to_config_text(const ScenarioConfig& config);

} // namespace p2pctrl
