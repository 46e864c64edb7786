#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "p2pctrl/config_io.hpp"

using namespace p2pctrl;

TEST_CASE("empty text gives the defaults") {
    CHECK(parse_config_text("") == default_config());
    CHECK(parse_config_text("# only a comment\n\n") == default_config());
}

TEST_CASE("single key override") {
    auto c = parse_config_text("n_nodes = 50\n");
    auto expected = default_config();
    expected.n_nodes = 50;
    CHECK(c == expected);
}

TEST_CASE("invalid alpha fails validation") {
    CHECK_THROWS_AS(parse_config_text("alpha = 2"), ConfigError);
    auto c = default_config();
    c.alpha = 2;
    CHECK_FALSE(validate(c).empty());
}

TEST_CASE("unknown key names the key and the line") {
    try {
        parse_config_text("n_nodes = 5\nfoo = 1\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("foo") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
    }
}

TEST_CASE("bad value reports its line") {
    try {
        parse_config_text("\n\nrounds = abc\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("validate collects every problem") {
    auto c = default_config();
    c.alpha = -1;
    c.b_max = 0;
    c.behavior_mix = {{behavior::Controlled{}, 0.5}};
    CHECK(validate(c).size() >= 3);
}

TEST_CASE("round trip through text") {
    auto c = default_config();
    c.n_nodes = 37;
    c.seed = 123456789012345ULL;
    c.alpha = 0.3;
    c.b_max = 0.1 + 0.2; // not exactly representable in short decimal
    c.upload_limit = 0.123456789;
    c.adaptive_r_in = true;
    c.behavior_mix = {{behavior::Controlled{}, 0.5},
                      {behavior::FreeRider{0.25}, 0.25},
                      {behavior::FixedStepRA{0.5}, 0.125},
                      {behavior::Whitewasher{4}, 0.125}};
    c.overload_schedule = {{120, 0.5}, {150, 1.0}};
    c.churn_schedule = {{200, 10, 10}, {300, 0, 5}};
    CHECK(parse_config_text(to_config_text(c)) == c);
    CHECK(parse_config_text(to_config_text(default_config())) == default_config());
}

TEST_CASE("schedules parse") {
    auto c = parse_config_text("overload = 120:0.5, 150:1\nchurn = 200:10:10\n"
                               "behavior_mix = controlled:0.75, freerider(0.5):0.25\n");
    REQUIRE(c.overload_schedule.size() == 2);
    CHECK(c.overload_schedule[0] == OverloadEntry{120, 0.5});
    REQUIRE(c.churn_schedule.size() == 1);
    CHECK(c.churn_schedule[0] == ChurnEntry{200, 10, 10});
    REQUIRE(c.behavior_mix.size() == 2);
    CHECK(c.behavior_mix[1].policy == BehaviorPolicy{behavior::FreeRider{0.5}});
}

TEST_CASE("behavior text round trip") {
    for (const char* s : {"controlled", "freerider(0.5)", "fixedstep(0.25)", "whitewasher(3)"})
        CHECK(to_string(parse_behavior(s)) == s);
    CHECK_THROWS(parse_behavior("lazy"));
    CHECK_THROWS(parse_behavior("freerider(x)"));
}

TEST_CASE("default upload limit follows b_max") {
    auto c = default_config();
    CHECK(c.effective_upload_limit() == doctest::Approx(kDefaultUploadHeadroom * c.b_max));
    c.upload_limit = 3.0;
    CHECK(c.effective_upload_limit() == 3.0);
}

TEST_CASE("parse_config reads files and reports missing ones") {
    const auto dir = std::filesystem::temp_directory_path() / "p2pctrl_cfg_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "a.cfg";
    std::ofstream(path) << "rounds = 42\n";
    CHECK(parse_config(path).rounds == 42);
    CHECK_THROWS_AS(parse_config(dir / "missing.cfg"), ConfigError);
}
