#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "exocause/direction.hpp"
#include "exocause/errors.hpp"
#include "exocause/mixture.hpp"

using namespace exocause;

namespace {

ExogeneityTestResult result(double p) {
    ExogeneityTestResult r;
    r.statistic = 1.0;
    r.p_value = p;
    r.permutations = 1000;
    r.b_effective = 200;
    return r;
}

InferenceConfig tiny_cfg() {
    InferenceConfig cfg;
    cfg.b = 16;
    cfg.grid_count = 12;
    cfg.permutations = 100;
    cfg.subsample_cap = 500;
    cfg.gp.max_iters = 50;
    cfg.seed = 3;
    cfg.workers = 2;
    return cfg;
}

}  // namespace

TEST_CASE("decide covers the four-way mapping") {
    CHECK(decide(result(0.40), result(0.002), 0.01).outcome == Outcome::XcausesY);
    CHECK(decide(result(0.002), result(0.40), 0.01).outcome == Outcome::YcausesX);
    CHECK(decide(result(0.30), result(0.30), 0.01).outcome == Outcome::NonIdentifiable);
    CHECK(decide(result(0.005), result(0.004), 0.01).outcome == Outcome::ConfounderSuspected);
}

TEST_CASE("p equal to alpha counts as rejection") {
    CHECK(decide(result(0.01), result(0.5), 0.01).outcome == Outcome::YcausesX);
    CHECK(decide(result(0.01), result(0.01), 0.01).outcome == Outcome::ConfounderSuspected);
}

TEST_CASE("the four outcomes partition the unit square") {
    const double alpha = 0.05;
    for (double px : {0.0, 0.01, 0.05, 0.0500001, 0.2, 1.0}) {
        for (double py : {0.0, 0.01, 0.05, 0.0500001, 0.2, 1.0}) {
            const auto d = decide(result(px), result(py), alpha);
            int matches = 0;
            if (px > alpha && py <= alpha) matches += d.outcome == Outcome::XcausesY;
            if (py > alpha && px <= alpha) matches += d.outcome == Outcome::YcausesX;
            if (px > alpha && py > alpha) matches += d.outcome == Outcome::NonIdentifiable;
            if (px <= alpha && py <= alpha) matches += d.outcome == Outcome::ConfounderSuspected;
            CHECK(matches == 1);
        }
    }
}

TEST_CASE("exchange symmetry of decide") {
    const auto a = decide(result(0.4), result(0.002), 0.01);
    const auto b = decide(result(0.002), result(0.4), 0.01);
    CHECK(a.outcome == Outcome::XcausesY);
    CHECK(b.outcome == Outcome::YcausesX);
    const auto c = decide(result(0.2), result(0.9), 0.5);
    const auto d = decide(result(0.9), result(0.2), 0.5);
    CHECK(c.outcome == Outcome::YcausesX);
    CHECK(d.outcome == Outcome::XcausesY);
}

TEST_CASE("outcome names") {
    CHECK(std::string(to_string(Outcome::XcausesY)) == "XcausesY");
    CHECK(std::string(to_string(Outcome::YcausesX)) == "YcausesX");
    CHECK(std::string(to_string(Outcome::NonIdentifiable)) == "NonIdentifiable");
    CHECK(std::string(to_string(Outcome::ConfounderSuspected)) == "ConfounderSuspected");
}

TEST_CASE("config validation") {
    InferenceConfig cfg = tiny_cfg();
    cfg.alpha = 0.6;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = tiny_cfg();
    cfg.permutations = 10;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = tiny_cfg();
    cfg.subsample_cap = 5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_NOTHROW(tiny_cfg().validate());
}

TEST_CASE("testing y-to-x equals testing x-to-y on the swapped sample") {
    MixtureParams p;
    const auto s = sample_mixture_pair(p, 70, 5);
    const auto cfg = tiny_cfg();
    const auto a = if_exogeneity(s, Direction::YtoX, cfg);
    const auto b = if_exogeneity(s.swapped(), Direction::XtoY, cfg);
    CHECK(a.statistic == b.statistic);
    CHECK(a.p_value == b.p_value);
    CHECK(a.b_effective == b.b_effective);
    CHECK(a.permutations == b.permutations);
}

TEST_CASE("infer_direction is deterministic and echoes the config") {
    MixtureParams p;
    p.means = {0.0, 0.0};
    const auto s = sample_mixture_pair(p, 60, 7);
    const auto cfg = tiny_cfg();
    const auto a = infer_direction(s, cfg);
    const auto b = infer_direction(s, cfg);
    CHECK(a.outcome == b.outcome);
    CHECK(a.test_xy.p_value == b.test_xy.p_value);
    CHECK(a.test_yx.statistic == b.test_yx.statistic);
    CHECK(a.config.b == cfg.b);
    CHECK(a.config.seed == cfg.seed);
}
