#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clocale>

#include "quatgreen/errors.hpp"
#include "quatgreen/run_config.hpp"

using namespace quatgreen;
using nlohmann::json;

TEST_CASE("command names round trip") {
    for (Command c : {Command::Density, Command::Borderline, Command::Holo, Command::McVerify, Command::Selftest})
        CHECK(command_from_name(command_name(c)) == c);
    CHECK(command_name(Command::McVerify) == "mc-verify");
    CHECK_THROWS_AS(command_from_name("plot"), ConfigError);
}

TEST_CASE("config json overlays defaults") {
    const json j = {{"ensemble_h", {{"kind", "two_atoms"}, {"mu", 1.2}}},
                    {"bbox", {-2.5, 2.5, -2.5, 2.5}},
                    {"grid", {64, 48}},
                    {"seed", 9},
                    {"samples", 3},
                    {"richardson", true}};
    const RunConfig cfg = merge_config_json(RunConfig{}, j);
    CHECK(std::get<TwoPoint>(cfg.ens_h).mu == 1.2);
    CHECK(std::holds_alternative<Semicircle>(cfg.ens_hp));
    REQUIRE(cfg.bbox);
    CHECK((*cfg.bbox)[1] == 2.5);
    CHECK(cfg.nx == 64);
    CHECK(cfg.ny == 48);
    CHECK(cfg.seed == 9u);
    CHECK(cfg.n_samples == 3);
    CHECK(cfg.richardson);
    CHECK(cfg.n == 256);
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("config json rejects bad input") {
    CHECK_THROWS_AS(merge_config_json({}, json{{"grdi", {10, 10}}}), ConfigError);
    CHECK_THROWS_AS(merge_config_json({}, json{{"grid", {10}}}), ConfigError);
    CHECK_THROWS_AS(merge_config_json({}, json{{"bbox", "wide"}}), ConfigError);
    CHECK_THROWS_AS(merge_config_json({}, json{{"seed", -1}}), ConfigError);
    CHECK_THROWS_AS(merge_config_json({}, json{{"n", 10.5}}), ConfigError);
    CHECK_THROWS_AS(merge_config_json({}, json{{"grid", {10, 1e12}}}), ConfigError);
    CHECK_THROWS_AS(merge_config_json({}, json{{"criteria", {1.5}}}), ConfigError);
    CHECK_THROWS_AS(merge_config_json({}, json::array()), ConfigError);
    CHECK_THROWS_AS(merge_config_json({}, json{{"ensemble_hp", {{"kind", "wishart"}, {"c", 1.0}}}}), ConfigError);
}

TEST_CASE("validation") {
    RunConfig cfg;
    cfg.nx = 4;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.bbox = std::array<double, 4>{1.0, -1.0, 0.0, 1.0};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.tol = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.gue_special = true;
    CHECK_NOTHROW(validate(cfg));
    cfg.ens_h = Semicircle{2.0};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.command = Command::McVerify;
    cfg.n = 1;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.criteria = {1, 11};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("bbox and grid strings") {
    const auto b = parse_bbox("-2,2.5, -1e0,3");
    CHECK(b == std::array<double, 4>{-2.0, 2.5, -1.0, 3.0});
    CHECK(parse_grid("101,81") == std::pair<int, int>{101, 81});
    CHECK_THROWS_AS(parse_bbox("1,2,3"), ConfigError);
    CHECK_THROWS_AS(parse_bbox("1,2,3,x"), ConfigError);
    CHECK_THROWS_AS(parse_bbox("1,2,3,4,"), ConfigError);
    CHECK_THROWS_AS(parse_grid("10.5,10"), ConfigError);
    CHECK_THROWS_AS(parse_grid("10"), ConfigError);
}

TEST_CASE("number parsing ignores the C locale") {
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
        CHECK(parse_bbox("-1.5,1.5,-1,1")[0] == -1.5);
        std::setlocale(LC_NUMERIC, "C");
    }
}

TEST_CASE("config echo") {
    RunConfig cfg;
    cfg.command = Command::Borderline;
    cfg.out = "curve.json";
    const json j = to_json(cfg);
    CHECK(j["command"] == "borderline");
    CHECK(j["bbox"].is_null());
    CHECK(j["ensemble_h"]["kind"] == "semicircle");
    json overlay = j;
    overlay.erase("command");
    CHECK(to_json(merge_config_json(cfg, overlay)) == j);
}
