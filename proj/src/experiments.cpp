#include "p2pctrl/experiments.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "p2pctrl/control.hpp"
#include "text.hpp"

namespace p2pctrl {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kNames[] = {
    {ExperimentKind::Run, "run"},
    {ExperimentKind::Tune, "tune"},
    {ExperimentKind::Linear, "linear"},
    {ExperimentKind::CompareLinear, "compare-linear"},
    {ExperimentKind::FreeriderSweep, "freerider-sweep"},
    {ExperimentKind::CompareRA, "compare-ra"},
    {ExperimentKind::WhitewashSweep, "whitewash-sweep"},
};

ControllerGains scenario_gains(const ScenarioConfig& c) {
    return tune(c.delta, c.g_max, c.r_min, c.b_fes_min, c.gain_margin, c.period_T);
}

std::vector<double> cohort_shared_series(const std::vector<RoundRecord>& history, std::size_t cohort) {
    std::vector<double> out;
    for (const auto& rec : history) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& n : rec.nodes)
            if (n.cohort == cohort) {
                sum += n.shared_upload;
                ++count;
            }
        if (count > 0) out.push_back(sum / static_cast<double>(count));
    }
    return out;
}

std::string optional_round(const std::optional<Round>& r) {
    return r ? std::to_string(*r) : std::string("none");
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
    auto out = open_output(path);
    fn(out);
    finish(out, path);
}

} // namespace

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
    for (const auto& [kind, text] : kNames)
        if (text == name) return kind;
    return std::nullopt;
}

std::string to_string(ExperimentKind kind) {
    for (const auto& [k, text] : kNames)
        if (k == kind) return std::string(text);
    return "unknown";
}

RunResult summarize(const ScenarioConfig& config, std::vector<RoundRecord> history) {
    RunResult result;
    result.config = config;
    result.history = std::move(history);
    result.overall = metrics(mean_utilization_series(result.history));

    for (std::size_t c = 0; c < config.behavior_mix.size(); ++c) {
        const auto series = cohort_series(result.history, c);
        if (series.empty()) continue;
        CohortSummary s;
        s.cohort = c;
        s.policy = to_string(config.behavior_mix[c].policy);
        s.nodes = static_cast<std::size_t>(std::count_if(
            result.history.back().nodes.begin(), result.history.back().nodes.end(),
            [c](const NodeRecord& n) { return n.cohort == c; }));
        s.metrics = metrics(series);
        const auto shared = cohort_shared_series(result.history, c);
        const auto window = std::span<const double>(shared).subspan(steady_window_start(shared.size()));
        const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
        s.shared_upload_amplitude = *hi - *lo;
        result.cohorts.push_back(std::move(s));
    }
    return result;
}

RunResult run_scenario(const ScenarioConfig& config) {
    World world(config);
    world.run_to_end();
    return summarize(config, world.history());
}

OverloadResult overload_shock(const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    OverloadResult out;
    out.shock_round = kShockRound;
    out.restore_round = kShockRound + kShockLength;
    cfg.rounds = std::max<std::size_t>(cfg.rounds, static_cast<std::size_t>(out.restore_round) + 100);
    cfg.overload_schedule = {{out.shock_round, 0.5}, {out.restore_round, 1.0}};
    out.run = run_scenario(cfg);

    const auto tail = std::span<const double>(out.run.overall.series)
                          .subspan(static_cast<std::size_t>(out.restore_round));
    out.peak_after_restore = *std::max_element(tail.begin(), tail.end());
    out.recovery_rounds = settling_round(tail);
    return out;
}

LinearComparison compare_linear(const ScenarioConfig& base) {
    LinearComparison out;
    out.full = run_scenario(base);
    const auto gains = scenario_gains(base);
    out.linear = simulate_linear(gains, gains.h_max, 1.0, base.rounds, base.warmup_rounds);
    out.report = compare_trajectories(out.linear, out.full.overall.series);
    return out;
}

RunResult freerider_sweep(const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    cfg.behavior_mix.clear();
    for (double f : kFreeriderFractions)
        cfg.behavior_mix.push_back(
            {behavior::FreeRider{f}, 1.0 / static_cast<double>(kFreeriderFractions.size())});
    return run_scenario(cfg);
}

RaComparison compare_ra(const ScenarioConfig& base, double step) {
    ScenarioConfig controlled = base;
    controlled.behavior_mix = {{behavior::Controlled{}, 1.0}};
    ScenarioConfig fixed = base;
    fixed.behavior_mix = {{behavior::FixedStepRA{step}, 1.0}};

    auto a = std::async(std::launch::async, [&] { return run_scenario(controlled); });
    auto b = std::async(std::launch::async, [&] { return run_scenario(fixed); });
    return RaComparison{a.get(), b.get(), step};
}

std::vector<WhitewashPoint> whitewash_sweep(const ScenarioConfig& base,
                                            const std::vector<double>& levels) {
    ScenarioConfig cfg = base;
    cfg.rounds = static_cast<std::size_t>(kWhitewashRound) + kWhitewashHorizon;

    auto one = [cfg](double level) {
        World world(cfg);
        world.run(static_cast<std::size_t>(kWhitewashRound));
        world.set_entry_threshold(level);
        world.churn(kWhitewashNewcomers, kWhitewashNewcomers);
        world.run_to_end();
        WhitewashPoint p;
        p.r_in = level;
        p.run = summarize(cfg, world.history());
        p.newcomers = metrics(newcomer_series(p.run.history, kWhitewashRound));
        return p;
    };

    std::vector<std::future<WhitewashPoint>> jobs;
    for (double level : levels) jobs.push_back(std::async(std::launch::async, one, level));
    std::vector<WhitewashPoint> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

void write_csv(std::ostream& out, const std::vector<RoundRecord>& history) {
    out << kCsvHeader << '\n' << std::setprecision(12);
    for (const auto& rec : history)
        for (const auto& n : rec.nodes)
            out << rec.round << ',' << n.id.value << ',' << n.utilization << ',' << n.shared_upload
                << ',' << n.reputation << ',' << n.received << ',' << n.instructed_upload << '\n';
}

void write_series_csv(std::ostream& out, const std::vector<double>& series) {
    out << "round,u\n" << std::setprecision(12);
    for (std::size_t r = 0; r < series.size(); ++r) out << r << ',' << series[r] << '\n';
}

std::vector<std::string> summary_lines(const std::string& experiment, const RunResult& result) {
    std::vector<std::string> lines;
    auto describe = [&](const std::string& head, const Metrics& m) {
        std::ostringstream s;
        s << std::setprecision(9) << "experiment=" << experiment << ' ' << head
          << " settling_round=" << optional_round(m.settling_round)
          << " steady_state_mean=" << m.steady_state_mean
          << " steady_state_error=" << m.steady_state_error
          << " oscillation_amplitude=" << m.oscillation_amplitude;
        return s.str();
    };
    lines.push_back(describe("cohort=all", result.overall));
    for (const auto& c : result.cohorts) {
        std::ostringstream head;
        head << std::setprecision(9) << "cohort=" << c.cohort << " policy=" << c.policy
             << " nodes=" << c.nodes << " shared_upload_amplitude=" << c.shared_upload_amplitude;
        lines.push_back(describe(head.str(), c.metrics));
    }
    return lines;
}

void run_experiment(ExperimentKind kind, const ScenarioConfig& config,
                    const std::filesystem::path& out_dir, std::ostream& log) {
    if (kind == ExperimentKind::Tune) {
        const auto g = scenario_gains(config);
        log << std::setprecision(9) << "h_max=" << g.h_max << " w_n=" << g.w_n << " k_p=" << g.k_p
            << " k_i=" << g.k_i << " gain_margin=" << g.gain_margin
            << " dead_time_T=" << g.dead_time_T << '\n';
        return;
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

    const std::string name = to_string(kind);
    std::vector<std::string> lines;
    auto append = [&](const std::vector<std::string>& more) {
        lines.insert(lines.end(), more.begin(), more.end());
    };

    switch (kind) {
    case ExperimentKind::Run: {
        const auto r = run_scenario(config);
        write_file(out_dir / "run.csv", [&](std::ostream& o) { write_csv(o, r.history); });
        append(summary_lines(name, r));
        break;
    }
    case ExperimentKind::Linear: {
        const auto g = scenario_gains(config);
        const auto u = simulate_linear(g, g.h_max, 1.0, config.rounds, config.warmup_rounds);
        write_file(out_dir / "linear.csv", [&](std::ostream& o) { write_series_csv(o, u); });
        const auto m = metrics(u);
        std::ostringstream s;
        s << std::setprecision(9) << "experiment=" << name << " plant_gain=" << g.h_max
          << " settling_round=" << optional_round(m.settling_round)
          << " steady_state_mean=" << m.steady_state_mean
          << " steady_state_error=" << m.steady_state_error
          << " oscillation_amplitude=" << m.oscillation_amplitude;
        lines.push_back(s.str());
        break;
    }
    case ExperimentKind::CompareLinear: {
        const auto c = compare_linear(config);
        write_file(out_dir / "full.csv", [&](std::ostream& o) { write_csv(o, c.full.history); });
        write_file(out_dir / "linear.csv", [&](std::ostream& o) { write_series_csv(o, c.linear); });
        append(summary_lines(name, c.full));
        std::ostringstream s;
        s << std::setprecision(9) << "experiment=" << name
          << " steady_state_gap=" << c.report.steady_state_gap
          << " transient_max_gap=" << c.report.transient_max_gap
          << " linear_settling=" << optional_round(c.report.linear_settling)
          << " full_settling=" << optional_round(c.report.full_settling);
        lines.push_back(s.str());
        break;
    }
    case ExperimentKind::FreeriderSweep: {
        const auto r = freerider_sweep(config);
        write_file(out_dir / "freerider.csv", [&](std::ostream& o) { write_csv(o, r.history); });
        append(summary_lines(name, r));
        break;
    }
    case ExperimentKind::CompareRA: {
        const auto c = compare_ra(config);
        write_file(out_dir / "controlled.csv", [&](std::ostream& o) { write_csv(o, c.controlled.history); });
        write_file(out_dir / "fixedstep.csv", [&](std::ostream& o) { write_csv(o, c.fixed_step.history); });
        append(summary_lines(name, c.controlled));
        append(summary_lines(name, c.fixed_step));
        break;
    }
    case ExperimentKind::WhitewashSweep: {
        for (const auto& p : whitewash_sweep(config)) {
            const std::string level = detail::shortest(p.r_in);
            write_file(out_dir / ("whitewash_r_in_" + level + ".csv"),
                       [&](std::ostream& o) { write_csv(o, p.run.history); });
            std::ostringstream s;
            s << std::setprecision(9) << "experiment=" << name << " r_in=" << level
              << " cohort=newcomers settling_round=" << optional_round(p.newcomers.settling_round)
              << " steady_state_mean=" << p.newcomers.steady_state_mean
              << " steady_state_error=" << p.newcomers.steady_state_error
              << " oscillation_amplitude=" << p.newcomers.oscillation_amplitude;
            lines.push_back(s.str());
        }
        break;
    }
    case ExperimentKind::Tune:
        break;
    }

    write_file(out_dir / "summary.txt", [&](std::ostream& o) {
        for (const auto& l : lines) o << l << '\n';
    });
    for (const auto& l : lines) log << l << '\n';
}

} // namespace p2pctrl
