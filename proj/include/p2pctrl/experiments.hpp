#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "p2pctrl/config.hpp"
#include "p2pctrl/linear_model.hpp"
#include "p2pctrl/metrics.hpp"
#include "p2pctrl/simulator.hpp"

namespace p2pctrl {

enum class ExperimentKind { Run, Tune, Linear, CompareLinear, FreeriderSweep, CompareRA, WhitewashSweep };

// Accepts the CLI spellings: run, tune, linear, compare-linear, freerider-sweep,
// compare-ra, whitewash-sweep.
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);
std::string to_string(ExperimentKind kind);

struct CohortSummary {
    std::size_t cohort = 0;
    std::string policy;
    std::size_t nodes = 0; // live in the final round
    Metrics metrics;       // on the cohort's mean U
    double shared_upload_amplitude = 0.0; // max-min of cohort mean shared upload, steady window
};

struct RunResult {
    ScenarioConfig config;
    std::vector<RoundRecord> history;
    Metrics overall;
    std::vector<CohortSummary> cohorts;
};

RunResult summarize(const ScenarioConfig& config, std::vector<RoundRecord> history);
RunResult run_scenario(const ScenarioConfig& config);

// Capacity drops to half at shock_round and comes back at restore_round.
struct OverloadResult {
    RunResult run;
    Round shock_round = 0;
    Round restore_round = 0;
    double peak_after_restore = 0.0;
    std::optional<Round> recovery_rounds; // from restore until mean U settles again
};
inline constexpr Round kShockRound = 150;
inline constexpr Round kShockLength = 30;
OverloadResult overload_shock(const ScenarioConfig& base);

struct LinearComparison {
    RunResult full;
    std::vector<double> linear;
    ComparisonReport report;
};
// Linear loop at plant gain h_max with the scenario's gains, rounds and warm-up.
LinearComparison compare_linear(const ScenarioConfig& base);

inline const std::vector<double> kFreeriderFractions{0.25, 0.5, 0.75, 1.0};
// One population split evenly into FreeRider(f) cohorts, in kFreeriderFractions order.
RunResult freerider_sweep(const ScenarioConfig& base);

struct RaComparison {
    RunResult controlled;
    RunResult fixed_step;
    double step = 0.0;
};
inline constexpr double kRaStep = 0.5;
// Two populations with identical configuration and seed, differing only in policy.
RaComparison compare_ra(const ScenarioConfig& base, double step = kRaStep);

inline const std::vector<double> kWhitewashLevels{0.00125, 0.0025, 0.005, 0.01};
inline constexpr Round kWhitewashRound = 200;
inline constexpr std::size_t kWhitewashHorizon = 1500; // rounds observed after the change
inline constexpr std::size_t kWhitewashNewcomers = 10;

struct WhitewashPoint {
    double r_in = 0.0;
    RunResult run;
    Metrics newcomers; // mean U of the nodes that joined at kWhitewashRound
};
// For each level: at kWhitewashRound the entry threshold (and r_min) is set to
// the level, gains are retuned and kWhitewashNewcomers nodes are replaced.
std::vector<WhitewashPoint> whitewash_sweep(const ScenarioConfig& base,
                                            const std::vector<double>& levels = kWhitewashLevels);

// Per-round CSV, one row per live node, 12 significant digits.
inline constexpr std::string_view kCsvHeader =
    "round,node_id,utilization,shared_upload,reputation,received_bw,instructed_upload";
void write_csv(std::ostream& out, const std::vector<RoundRecord>& history);
void write_series_csv(std::ostream& out, const std::vector<double>& series);

// key=value summary lines, one per cohort.
std::vector<std::string> summary_lines(const std::string& experiment, const RunResult& result);

// Runs the experiment, writes CSV files and summary.txt under out_dir and
// echoes the summary to `log`. Throws std::runtime_error on I/O failure.
void run_experiment(ExperimentKind kind, const ScenarioConfig& config,
                    const std::filesystem::path& out_dir, std::ostream& log);

} // namespace p2pctrl
