// p2pctrl <experiment> --config <path> --out <dir> [--seed N] [--rounds N]
//
// Seed precedence: --seed, then P2PCTRL_SEED, then the config file.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "p2pctrl/config_io.hpp"
#include "p2pctrl/experiments.hpp"

namespace {

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("P2PCTRL_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(raw, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || raw[used] != '\0')
        throw p2pctrl::ConfigError({std::string("P2PCTRL_SEED is not an unsigned integer: ") + raw});
    return value;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reputation-based bandwidth control experiments for P2P swarms"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> rounds;

    const char* names[] = {"run", "tune", "linear", "compare-linear", "freerider-sweep",
                           "compare-ra", "whitewash-sweep"};
    for (const char* name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "scenario file (key = value lines)");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "overrides P2PCTRL_SEED and the config seed");
        sub->add_option("--rounds", rounds, "number of rounds");
    }

    CLI11_PARSE(app, argc, argv);

    const std::string chosen = app.get_subcommands().front()->get_name();
    const auto kind = p2pctrl::parse_experiment_kind(chosen);
    if (!kind) {
        std::cerr << "unknown experiment " << chosen << '\n';
        return 2;
    }

    try {
        p2pctrl::ScenarioConfig config =
            config_path.empty() ? p2pctrl::default_config() : p2pctrl::parse_config(config_path);
        if (auto env = seed_from_env()) config.seed = *env;
        if (seed) config.seed = *seed;
        if (rounds) config.rounds = *rounds;
        if (auto problems = p2pctrl::validate(config); !problems.empty())
            throw p2pctrl::ConfigError(std::move(problems));

        p2pctrl::run_experiment(*kind, config, out_dir, std::cout);
    } catch (const p2pctrl::ConfigError& e) {
        for (const auto& p : e.problems()) std::cerr << "config error: " << p << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
