#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uniseek/harness.hpp"
#include "uniseek/scenario.hpp"

using namespace uniseek;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using nlohmann::json;

#ifndef UNISEEK_CONFIG_DIR
#define UNISEEK_CONFIG_DIR "configs"
#endif

namespace {

json valid_doc() {
    return json::parse(R"({
        "name": "unit-test scenario",
        "field": {"type": "circular", "f_star": 1.0, "source": [0.25, -0.5], "q_r": 1.5},
        "controller": {"a": 2.0, "g": 1.0, "eps": 0.01, "b": 2.0, "c": 500.0,
                       "h": 2.0, "V_c": 0.0005, "R": 0.1},
        "initial": {"position": [1.0, 1.0], "theta": -1.5, "e": 0.75, "eta": 0.1},
        "sde": {"dt": 0.0001, "t_end": 2.0, "record_stride": 100,
                "noise": "exact_increment", "t_hold": 0.002},
        "seed": 7,
        "metrics": {"delta": 0.2, "window_fraction": 0.25},
        "average": {"dt": 0.002, "t_end": 5.0, "record_stride": 20}
    })");
}

Scenario small_scenario() {
    json j = valid_doc();
    j["initial"].erase("e");
    return parse_scenario(j);
}

}  // namespace

TEST_CASE("a complete config document lands in every scenario field") {
    const Scenario sc = parse_scenario(valid_doc());
    REQUIRE(sc.name == "unit-test scenario");
    REQUIRE(sc.field.type() == FieldType::circular);
    REQUIRE(sc.field.f_star() == 1.0);
    REQUIRE(sc.field.source().x == 0.25);
    REQUIRE(sc.field.source().y == -0.5);
    REQUIRE(sc.field.q_r() == 1.5);
    REQUIRE(sc.params.a == 2.0);
    REQUIRE(sc.params.g == 1.0);
    REQUIRE(sc.params.eps == 0.01);
    REQUIRE(sc.params.b == 2.0);
    REQUIRE(sc.params.c == 500.0);
    REQUIRE(sc.params.h == 2.0);
    REQUIRE(sc.params.V_c == 0.0005);
    REQUIRE(sc.params.R == 0.1);
    REQUIRE(sc.position0.x == 1.0);
    REQUIRE(sc.theta0 == -1.5);
    REQUIRE(sc.e0.has_value());
    REQUIRE(*sc.e0 == 0.75);
    REQUIRE(sc.eta0 == 0.1);
    REQUIRE(sc.sde.dt == 0.0001);
    REQUIRE(sc.sde.t_end == 2.0);
    REQUIRE(sc.sde.record_stride == 100);
    REQUIRE(sc.sde.noise == NoiseModel::exact_increment);
    REQUIRE(sc.sde.t_hold == 0.002);
    REQUIRE(sc.seed == 7);
    REQUIRE(sc.metrics.delta == 0.2);
    REQUIRE(sc.metrics.window_fraction == 0.25);
    REQUIRE(sc.avg.dt == 0.002);
    REQUIRE(sc.avg.t_end == 5.0);
    REQUIRE(sc.avg.record_stride == 20);
}

TEST_CASE("filter initialization policy") {
    SECTION("an explicit number is used verbatim") {
        const Scenario sc = parse_scenario(valid_doc());
        REQUIRE(initial_state(sc).e == 0.75);
    }
    SECTION("absent key means the filter starts at the local field reading") {
        json j = valid_doc();
        j["initial"].erase("e");
        const Scenario sc = parse_scenario(j);
        REQUIRE_FALSE(sc.e0.has_value());
        const VehicleState s0 = initial_state(sc);
        REQUIRE(s0.e == sc.field.evaluate(sensor_position(s0, sc.params)));
    }
    SECTION("the string \"field\" requests the same policy explicitly") {
        json j = valid_doc();
        j["initial"]["e"] = "field";
        REQUIRE_FALSE(parse_scenario(j).e0.has_value());
    }
    SECTION("anything else is rejected") {
        json j = valid_doc();
        j["initial"]["e"] = "auto";
        REQUIRE_THROWS_MATCHES(parse_scenario(j), ConfigError,
                               Catch::Matchers::MessageMatches(
                                   ContainsSubstring("initial.e")));
    }
}

TEST_CASE("unknown config keys fail fast and are all named") {
    SECTION("top level") {
        json j = valid_doc();
        j["bogus"] = 1;
        REQUIRE_THROWS_MATCHES(parse_scenario(j), ConfigError,
                               Catch::Matchers::MessageMatches(
                                   ContainsSubstring("unknown config key(s)") &&
                                   ContainsSubstring("bogus")));
    }
    SECTION("several offenders in one object are reported together") {
        json j = valid_doc();
        j["controller"]["alpha"] = 1;
        j["controller"]["beta"] = 2;
        REQUIRE_THROWS_MATCHES(parse_scenario(j), ConfigError,
                               Catch::Matchers::MessageMatches(
                                   ContainsSubstring("controller.alpha") &&
                                   ContainsSubstring("controller.beta")));
    }
    SECTION("field subobject") {
        json j = valid_doc();
        j["field"]["q_p"] = 0.5;  // circular fields take no eccentricity
        REQUIRE_THROWS_MATCHES(parse_scenario(j), ConfigError,
                               Catch::Matchers::MessageMatches(
                                   ContainsSubstring("field.q_p")));
    }
}

TEST_CASE("missing or ill-typed required keys are rejected") {
    for (const char* key : {"field", "controller", "initial", "sde", "seed"}) {
        json j = valid_doc();
        j.erase(key);
        REQUIRE_THROWS_AS(parse_scenario(j), ConfigError);
    }
    SECTION("missing controller gain") {
        json j = valid_doc();
        j["controller"].erase("V_c");
        REQUIRE_THROWS_MATCHES(parse_scenario(j), ConfigError,
                               Catch::Matchers::MessageMatches(
                                   ContainsSubstring("controller.V_c")));
    }
    SECTION("missing initial position") {
        json j = valid_doc();
        j["initial"].erase("position");
        REQUIRE_THROWS_AS(parse_scenario(j), ConfigError);
    }
    SECTION("missing horizon") {
        json j = valid_doc();
        j["sde"].erase("t_end");
        REQUIRE_THROWS_AS(parse_scenario(j), ConfigError);
    }
    SECTION("unknown field type") {
        json j = valid_doc();
        j["field"]["type"] = "gaussian";
        REQUIRE_THROWS_MATCHES(parse_scenario(j), ConfigError,
                               Catch::Matchers::MessageMatches(
                                   ContainsSubstring("gaussian")));
    }
    SECTION("unknown noise model") {
        json j = valid_doc();
        j["sde"]["noise"] = "pink";
        REQUIRE_THROWS_AS(parse_scenario(j), ConfigError);
    }
    SECTION("negative seed") {
        json j = valid_doc();
        j["seed"] = -3;
        REQUIRE_THROWS_AS(parse_scenario(j), ConfigError);
    }
    SECTION("fractional seed") {
        json j = valid_doc();
        j["seed"] = 1.5;
        REQUIRE_THROWS_AS(parse_scenario(j), ConfigError);
    }
    SECTION("invalid controller parameters surface as config errors") {
        json j = valid_doc();
        j["controller"]["R"] = 0.0;
        j["controller"]["a"] = -1.0;
        REQUIRE_THROWS_MATCHES(parse_scenario(j), ConfigError,
                               Catch::Matchers::MessageMatches(
                                   ContainsSubstring("controller:")));
    }
}

TEST_CASE("optional blocks fall back to defaults") {
    json j = valid_doc();
    j.erase("name");
    j.erase("metrics");
    j.erase("average");
    j["sde"].erase("noise");
    j["sde"].erase("dt");
    j["sde"].erase("record_stride");
    j["sde"].erase("t_hold");
    j["initial"].erase("eta");
    j["initial"].erase("e");
    const Scenario sc = parse_scenario(j);
    REQUIRE(sc.name.empty());
    REQUIRE(sc.metrics.delta == 0.1);
    REQUIRE(sc.metrics.window_fraction == 0.2);
    REQUIRE(sc.sde.noise == NoiseModel::band_limited);
    REQUIRE(sc.sde.dt == 0.0);  // resolved to eps/100 inside simulate()
    REQUIRE(sc.sde.record_stride == 10);
    REQUIRE(sc.eta0 == 0.0);
    REQUIRE(sc.avg.t_end == sc.sde.t_end);  // analysis horizon follows the SDE horizon
}

TEST_CASE("every shipped config parses and is internally consistent") {
    namespace fs = std::filesystem;
    const fs::path dir = UNISEEK_CONFIG_DIR;
    REQUIRE(fs::is_directory(dir));
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    REQUIRE(files.size() == 8);
    for (const fs::path& f : files) {
        INFO(f.string());
        const Scenario sc = load_scenario(f);
        REQUIRE_FALSE(sc.name.empty());
        REQUIRE(sc.sde.t_end > 0.0);
        REQUIRE_NOTHROW(sc.params.validate());
        REQUIRE_FALSE(sc.e0.has_value());  // all shipped runs start with a zeroed washout
    }
    const Scenario dwell = load_scenario(dir / "circular-dwell.json");
    REQUIRE(dwell.field.type() == FieldType::circular);
    REQUIRE(dwell.field.q_r() == 1.5);
    REQUIRE(dwell.params.V_c == 0.0005);
    REQUIRE(dwell.seed == 42);
}

TEST_CASE("config files that cannot be used are rejected with context") {
    namespace fs = std::filesystem;
    REQUIRE_THROWS_MATCHES(load_scenario("no/such/file.json"), ConfigError,
                           Catch::Matchers::MessageMatches(
                               ContainsSubstring("cannot open")));
    const fs::path bad = fs::temp_directory_path() / "uniseek_test_bad.json";
    std::ofstream(bad) << "{ not json";
    REQUIRE_THROWS_MATCHES(load_scenario(bad), ConfigError,
                           Catch::Matchers::MessageMatches(
                               ContainsSubstring("not valid JSON")));
    fs::remove(bad);
}

TEST_CASE("a scenario run is deterministic end to end") {
    const Scenario sc = small_scenario();
    const RunResult a = run_scenario(sc);
    const RunResult b = run_scenario(sc);
    REQUIRE_FALSE(a.trajectory.rows.empty());
    REQUIRE(a.trajectory.rows.size() == b.trajectory.rows.size());
    const auto& sa = a.trajectory.rows.back().state;
    const auto& sb = b.trajectory.rows.back().state;
    REQUIRE(sa.as_array() == sb.as_array());
    REQUIRE(a.metrics.trailing_mean_distance == b.metrics.trailing_mean_distance);
    REQUIRE(std::isfinite(a.metrics.heading_alignment));
    REQUIRE(a.trajectory.rows.front().t == 0.0);
    REQUIRE_THAT(a.trajectory.rows.back().t, WithinAbs(sc.sde.t_end, 1e-9));
}

TEST_CASE("quantiles interpolate linearly") {
    REQUIRE_THAT(quantile({4.0, 1.0, 3.0, 2.0}, 0.25), WithinAbs(1.75, 1e-15));
    REQUIRE_THAT(quantile({4.0, 1.0, 3.0, 2.0}, 0.5), WithinAbs(2.5, 1e-15));
    REQUIRE_THAT(quantile({4.0, 1.0, 3.0, 2.0}, 0.75), WithinAbs(3.25, 1e-15));
    REQUIRE_THAT(quantile({5.0}, 0.5), WithinAbs(5.0, 1e-15));
    REQUIRE(std::isnan(quantile({}, 0.5)));
}

TEST_CASE("Monte Carlo sweeps are reproducible and fully indexed") {
    const Scenario sc = small_scenario();
    const MonteCarloResult a = monte_carlo(sc, 4);
    const MonteCarloResult b = monte_carlo(sc, 4);
    REQUIRE(a.runs.size() == 4);
    REQUIRE(a.n_ok == 4);
    for (int i = 0; i < 4; ++i) {
        const auto& rec = a.runs[static_cast<std::size_t>(i)];
        REQUIRE(rec.index == i);
        REQUIRE(rec.ok);
        REQUIRE(rec.seed == substream_seed(sc.seed, static_cast<std::uint64_t>(i)));
        REQUIRE(rec.metrics.trailing_mean_distance ==
                b.runs[static_cast<std::size_t>(i)].metrics.trailing_mean_distance);
    }
    // distinct seeds produce distinct trajectories
    REQUIRE(a.runs[0].metrics.final_distance != a.runs[1].metrics.final_distance);
    REQUIRE(a.trailing_mean_distance.median == b.trailing_mean_distance.median);
    REQUIRE(a.mean_heading_alignment == b.mean_heading_alignment);
    REQUIRE_THROWS_AS(monte_carlo(sc, 0), InvalidParameter);
}

TEST_CASE("averaging validation compares the SDE ensemble against the averaged flow") {
    Scenario sc = small_scenario();
    SECTION("well-formed request") {
        const AveragingValidationResult r = validate_averaging(sc, {0.01}, 2, 2.0, 0.01);
        REQUIRE(r.rows.size() == 1);
        REQUIRE(r.rows[0].eps == 0.01);
        REQUIRE_THAT(r.rows[0].dt, WithinAbs(1e-4, 1e-18));
        REQUIRE(r.rows[0].sup_discrepancy >= 0.0);
        REQUIRE(std::isfinite(r.rows[0].sup_discrepancy));
        REQUIRE(r.grid_t.size() == 201);
        REQUIRE(r.reference_r.size() == 201);
        REQUIRE(r.monotone_shrink);  // single row: trivially non-increasing
    }
    SECTION("grid must be commensurate with the step") {
        REQUIRE_THROWS_MATCHES(validate_averaging(sc, {0.0071}, 1, 1.0, 0.01), InvalidParameter,
                               Catch::Matchers::MessageMatches(
                                   ContainsSubstring("grid_dt")));
    }
    SECTION("path count and horizons are validated") {
        REQUIRE_THROWS_AS(validate_averaging(sc, {0.01}, 0, 1.0, 0.01), InvalidParameter);
        REQUIRE_THROWS_AS(validate_averaging(sc, {0.01}, 1, -1.0, 0.01), InvalidParameter);
        REQUIRE_THROWS_AS(validate_averaging(sc, {-0.01}, 1, 1.0, 0.01), InvalidParameter);
    }
    SECTION("only quadratic fields have an averaged reference") {
        Scenario rb = sc;
        rb.field = ScalarField::rosenbrock();
        REQUIRE_THROWS_AS(validate_averaging(rb, {0.01}, 1, 1.0, 0.01), InvalidParameter);
    }
}

TEST_CASE("scenario reports carry analysis for quadratic fields only") {
    const Scenario sc = small_scenario();
    SECTION("quadratic: closed-form blocks present") {
        const json j = report(sc);
        REQUIRE(j.contains("scenario"));
        REQUIRE(j.at("scenario").at("name") == sc.name);
        REQUIRE(j.contains("equilibria"));
        REQUIRE(j.contains("stability"));
        REQUIRE_FALSE(j.contains("simulation"));
    }
    SECTION("simulation block on request") {
        const json j = report(sc, true);
        REQUIRE(j.contains("simulation"));
        REQUIRE(j.at("simulation").contains("metrics"));
        REQUIRE(j.at("simulation").at("dt").get<double>() == sc.sde.dt);
    }
    SECTION("non-quadratic fields state the limitation instead") {
        Scenario rb = sc;
        rb.field = ScalarField::rosenbrock();
        const json j = report(rb);
        REQUIRE_FALSE(j.contains("equilibria"));
        REQUIRE(j.contains("analysis"));
        REQUIRE_THAT(j.at("analysis").get<std::string>(),
                     ContainsSubstring("quadratic"));
    }
}
