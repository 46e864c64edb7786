#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "p2pctrl/reputation.hpp"

using namespace p2pctrl;

TEST_CASE("trust is the delivered fraction of the demand") {
    CHECK(trust({NodeId{1}, NodeId{2}, 1.0, 2.0, 0}) == doctest::Approx(0.5));
    CHECK(trust({NodeId{1}, NodeId{2}, 0.0, 2.0, 0}) == 0.0);
    CHECK(trust({NodeId{1}, NodeId{2}, 2.0, 2.0, 0}) == 1.0);
    CHECK_THROWS_AS(trust({NodeId{1}, NodeId{2}, 0.0, 0.0, 0}), std::domain_error);
}

TEST_CASE("reputation moves halfway toward the mean trust") {
    const std::vector<double> t1{1.0};
    CHECK(update_reputation(0.0, t1, 0.5) == doctest::Approx(0.5));
    const std::vector<double> t2{0.0, 1.0};
    CHECK(update_reputation(1.0, t2, 0.5) == doctest::Approx(0.75));
    const std::vector<double> t3{0.25, 0.25};
    CHECK(update_reputation(0.25, t3, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("no service this round keeps the reputation") {
    CHECK(update_reputation(0.42, {}, 0.5) == 0.42);
}

TEST_CASE("alpha extremes") {
    const std::vector<double> t{0.3, 0.9};
    CHECK(update_reputation(0.1, t, 1.0) == doctest::Approx(0.1));
    CHECK(update_reputation(0.1, t, 0.0) == doctest::Approx(0.6));
}

TEST_CASE("reputation stays in the unit interval") {
    double r = 1.0;
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> t{(i % 3) / 2.0, (i % 5) / 4.0};
        r = update_reputation(r, t, 0.5);
        REQUIRE(r >= 0.0);
        REQUIRE(r <= 1.0);
    }
}

TEST_CASE("eligibility threshold is inclusive") {
    CHECK(eligible(0.01, 0.01));
    CHECK_FALSE(eligible(0.0099, 0.01));
    CHECK(eligible(1.0, 0.01));
}
