#include <doctest.h>

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "plrec/config.hpp"
#include "plrec/errors.hpp"

using namespace plrec;
using nlohmann::json;

namespace {

json minimal_config() {
    return json::parse(R"({
        "potential": {"V0": 1.0, "k": 1.0, "domain": "truncated"},
        "kbar": 1.0,
        "n_bar": 20
    })");
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
    const ExperimentConfig cfg = parse_config(minimal_config());
    CHECK(cfg.potential.exponent_k == 1.0);
    CHECK(cfg.potential.maslov_gamma == 3);
    CHECK(cfg.potential.domain == DomainKind::truncated);
    CHECK(cfg.kbar == 1.0);
    CHECK(cfg.n_bar == 20.0);
    CHECK_FALSE(cfg.drive.has_value());
    CHECK_FALSE(cfg.sweep.has_value());
}

TEST_CASE("unknown keys are rejected with the key echoed") {
    json doc = minimal_config();
    doc["potental"] = 1;  // typo
    try {
        parse_config(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("potental") != std::string::npos);
    }

    json nested = minimal_config();
    nested["drive"] = {{"lamda", 0.1}};  // typo inside a block
    try {
        parse_config(nested);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("drive.lamda") != std::string::npos);
    }
}

TEST_CASE("required keys and value sanity") {
    json doc;
    doc["kbar"] = 1.0;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);

    json bad = minimal_config();
    bad["kbar"] = -1.0;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    json both = minimal_config();
    both["run"] = {{"dt", 0.01}, {"steps_per_period", 512}};
    CHECK_THROWS_AS(parse_config(both), ConfigError);

    json times = minimal_config();
    times["run"] = {{"total_time", 10.0}, {"periods", 2.0}};
    CHECK_THROWS_AS(parse_config(times), ConfigError);
}

TEST_CASE("drive and sweep blocks") {
    json doc = minimal_config();
    doc["drive"] = {{"lambda", 0.05}, {"V", 1.0}, {"N", 2}, {"shape", "linear"}};
    doc["sweep"] = {{"parameter", "drive.lambda"}, {"values", {0.0, 0.1}}};
    const ExperimentConfig cfg = parse_config(doc);
    REQUIRE(cfg.drive.has_value());
    CHECK(cfg.drive->lambda == 0.05);
    CHECK(cfg.drive->N == 2);
    CHECK(cfg.drive_shape == DriveShape::linear);
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->parameter == "drive.lambda");
    CHECK(cfg.sweep->values.size() == 2);

    json bad = doc;
    bad["drive"]["lambda"] = -0.1;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("dotted overrides") {
    json doc = minimal_config();
    apply_override(doc, "kbar=2.5");
    apply_override(doc, "potential.k=4");
    apply_override(doc, "potential.domain=symmetric");
    apply_override(doc, "potential.gamma=2");
    apply_override(doc, "drive.lambda=0.1");
    apply_override(doc, "drive.V=1.0");
    const ExperimentConfig cfg = parse_config(doc);
    CHECK(cfg.kbar == 2.5);
    CHECK(cfg.potential.exponent_k == 4.0);
    CHECK(cfg.potential.domain == DomainKind::symmetric);
    REQUIRE(cfg.drive.has_value());
    CHECK(cfg.drive->lambda == 0.1);

    CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
}

TEST_CASE("doubles serialize deterministically, infinities as strings") {
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(json_number(std::numeric_limits<double>::infinity()) == "inf");

    const double value = 12.345678901234567;
    CHECK(std::stod(format_double(value)) == value);
    const double pi_ish = 4.0 * std::atan(1.0);
    CHECK(std::stod(format_double(pi_ish)) == pi_ish);
}
