#include "p2pctrl/config_io.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "text.hpp"

namespace p2pctrl {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == sep && depth == 0) {
            out.push_back(detail::trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(detail::trim(s.substr(start)));
    return out;
}

struct BadValue {
    std::string message;
};

template <class T>
T number(std::string_view v) {
    auto parsed = detail::parse_number<T>(v);
    if (!parsed) throw BadValue{"cannot parse '" + std::string(v) + "' as a number"};
    return *parsed;
}

std::size_t count(std::string_view v) {
    auto n = number<std::int64_t>(v);
    if (n < 0) throw BadValue{"expected a non-negative count, got " + std::string(v)};
    return static_cast<std::size_t>(n);
}

bool boolean(std::string_view v) {
    v = detail::trim(v);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw BadValue{"expected true/false, got '" + std::string(v) + "'"};
}

std::vector<BehaviorShare> behavior_list(std::string_view v) {
    std::vector<BehaviorShare> out;
    if (detail::trim(v).empty()) return out;
    for (auto item : split(v, ',')) {
        const auto colon = item.rfind(':');
        if (colon == std::string_view::npos)
            throw BadValue{"behavior entry '" + std::string(item) + "' needs policy:fraction"};
        try {
            out.push_back({parse_behavior(std::string(item.substr(0, colon))),
                           number<double>(item.substr(colon + 1))});
        } catch (const std::invalid_argument& e) {
            throw BadValue{e.what()};
        }
    }
    return out;
}

std::vector<OverloadEntry> overload_list(std::string_view v) {
    std::vector<OverloadEntry> out;
    if (detail::trim(v).empty()) return out;
    for (auto item : split(v, ',')) {
        auto fields = split(item, ':');
        if (fields.size() != 2)
            throw BadValue{"overload entry '" + std::string(item) + "' needs round:scale"};
        out.push_back({number<Round>(fields[0]), number<double>(fields[1])});
    }
    return out;
}

std::vector<ChurnEntry> churn_list(std::string_view v) {
    std::vector<ChurnEntry> out;
    if (detail::trim(v).empty()) return out;
    for (auto item : split(v, ',')) {
        auto fields = split(item, ':');
        if (fields.size() != 3)
            throw BadValue{"churn entry '" + std::string(item) +
                           "' needs round:departures:arrivals"};
        out.push_back({number<Round>(fields[0]), count(fields[1]), count(fields[2])});
    }
    return out;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table{
        {"n_nodes", [](auto& c, auto v) { c.n_nodes = count(v); }},
        {"rounds", [](auto& c, auto v) { c.rounds = count(v); }},
        {"seed", [](auto& c, auto v) { c.seed = number<std::uint64_t>(v); }},
        {"alpha", [](auto& c, auto v) { c.alpha = number<double>(v); }},
        {"g_max", [](auto& c, auto v) { c.g_max = count(v); }},
        {"delta", [](auto& c, auto v) { c.delta = number<double>(v); }},
        {"b_fes_min", [](auto& c, auto v) { c.b_fes_min = number<double>(v); }},
        {"r_min", [](auto& c, auto v) { c.r_min = number<double>(v); }},
        {"r_in_max", [](auto& c, auto v) { c.r_in_max = number<double>(v); }},
        {"gain_margin", [](auto& c, auto v) { c.gain_margin = number<double>(v); }},
        {"period_T", [](auto& c, auto v) { c.period_T = count(v); }},
        {"b_max", [](auto& c, auto v) { c.b_max = number<double>(v); }},
        {"upload_limit", [](auto& c, auto v) { c.upload_limit = number<double>(v); }},
        {"warmup_rounds", [](auto& c, auto v) { c.warmup_rounds = count(v); }},
        {"adaptive_r_in", [](auto& c, auto v) { c.adaptive_r_in = boolean(v); }},
        {"behavior_mix", [](auto& c, auto v) { c.behavior_mix = behavior_list(v); }},
        {"overload", [](auto& c, auto v) { c.overload_schedule = overload_list(v); }},
        {"churn", [](auto& c, auto v) { c.churn_schedule = churn_list(v); }},
    };
    return table;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems, "; ")), problems_(std::move(problems)) {}

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig config = default_config();
    std::vector<std::string> problems;

    std::istringstream in(text);
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        const std::string where = "line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            problems.push_back(where + "expected 'key = value'");
            continue;
        }
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));

        auto it = setters().find(key);
        if (it == setters().end()) {
            problems.push_back(where + "unknown key '" + std::string(key) + "'");
            continue;
        }
        try {
            it->second(config, value);
        } catch (const BadValue& e) {
            problems.push_back(where + "invalid value for '" + std::string(key) + "': " + e.message);
        }
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));

    if (auto errors = validate(config); !errors.empty()) throw ConfigError(std::move(errors));
    return config;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file " + path.string()});
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string to_config_text(const ScenarioConfig& c) {
    using detail::shortest;
    std::ostringstream out;
    out << "n_nodes = " << c.n_nodes << '\n'
        << "rounds = " << c.rounds << '\n'
        << "seed = " << c.seed << '\n'
        << "alpha = " << shortest(c.alpha) << '\n'
        << "g_max = " << c.g_max << '\n'
        << "delta = " << shortest(c.delta) << '\n'
        << "b_fes_min = " << shortest(c.b_fes_min) << '\n'
        << "r_min = " << shortest(c.r_min) << '\n'
        << "r_in_max = " << shortest(c.r_in_max) << '\n'
        << "gain_margin = " << shortest(c.gain_margin) << '\n'
        << "period_T = " << c.period_T << '\n'
        << "b_max = " << shortest(c.b_max) << '\n';
    if (c.upload_limit) out << "upload_limit = " << shortest(*c.upload_limit) << '\n';
    out << "warmup_rounds = " << c.warmup_rounds << '\n'
        << "adaptive_r_in = " << (c.adaptive_r_in ? "true" : "false") << '\n';

    std::vector<std::string> items;
    for (const auto& s : c.behavior_mix) items.push_back(to_string(s.policy) + ":" + shortest(s.fraction));
    out << "behavior_mix = " << join(items, ", ") << '\n';

    items.clear();
    for (const auto& e : c.overload_schedule)
        items.push_back(std::to_string(e.round) + ":" + shortest(e.scale));
    out << "overload = " << join(items, ", ") << '\n';

    items.clear();
    for (const auto& e : c.churn_schedule)
        items.push_back(std::to_string(e.round) + ":" + std::to_string(e.departures) + ":" +
                        std::to_string(e.arrivals));
    out << "churn = " << join(items, ", ") << '\n';
    return out.str();
}

} // namespace p2pctrl
