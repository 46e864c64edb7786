#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "p2pctrl/experiments.hpp"

using namespace p2pctrl;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "p2pctrl_unit" / name;
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("experiment names") {
    CHECK(parse_experiment_kind("run") == ExperimentKind::Run);
    CHECK(parse_experiment_kind("whitewash-sweep") == ExperimentKind::WhitewashSweep);
    CHECK_FALSE(parse_experiment_kind("nope"));
    for (auto k : {ExperimentKind::Run, ExperimentKind::Tune, ExperimentKind::Linear,
                   ExperimentKind::CompareLinear, ExperimentKind::FreeriderSweep,
                   ExperimentKind::CompareRA, ExperimentKind::WhitewashSweep})
        CHECK(parse_experiment_kind(to_string(k)) == k);
}

TEST_CASE("csv schema") {
    auto c = default_config();
    c.n_nodes = 5;
    c.rounds = 12;
    const auto r = run_scenario(c);
    std::ostringstream out;
    write_csv(out, r.history);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 6);
    }
    CHECK(rows == 5 * 12);
}

TEST_CASE("csv keeps enough digits") {
    RoundRecord rec;
    rec.nodes.push_back({NodeId{1}, 0, 0, 1.0 / 3.0, 0, 0, 0, 0});
    std::ostringstream out;
    write_csv(out, {rec});
    CHECK(out.str().find("0.333333333333") != std::string::npos);
}

TEST_CASE("run twice, identical bytes") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    std::ostringstream log;
    run_experiment(ExperimentKind::Run, default_config(), a, log);
    run_experiment(ExperimentKind::Run, default_config(), b, log);
    const auto x = slurp(a / "run.csv");
    CHECK(!x.empty());
    CHECK(x == slurp(b / "run.csv"));
    CHECK(slurp(a / "summary.txt") == slurp(b / "summary.txt"));
}

TEST_CASE("tune prints the gains") {
    std::ostringstream log;
    run_experiment(ExperimentKind::Tune, default_config(), scratch("tune"), log);
    CHECK(log.str().find("h_max=25 ") != std::string::npos);
    CHECK(log.str().find("k_p=0.0034641") != std::string::npos);
    CHECK(log.str().find("k_i=1.5114") != std::string::npos);
}

TEST_CASE("free-rider sweep summarizes four cohorts") {
    const auto r = freerider_sweep(default_config());
    REQUIRE(r.cohorts.size() == 4);
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(r.cohorts[i].metrics.steady_state_mean >= r.cohorts[i - 1].metrics.steady_state_mean);
    const auto lines = summary_lines("freerider-sweep", r);
    CHECK(lines.size() == 5);
    CHECK(lines[1].find("policy=freerider(0.25)") != std::string::npos);
}

TEST_CASE("output path that is a file surfaces an error") {
    const auto dir = scratch("blocked");
    std::filesystem::create_directories(dir);
    const auto file = dir / "not_a_dir";
    std::ofstream(file) << "x";
    std::ostringstream log;
    CHECK_THROWS_AS(run_experiment(ExperimentKind::Run, default_config(), file / "sub", log),
                    std::runtime_error);
}
