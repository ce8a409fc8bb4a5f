#include <string>

#include "aqi/config_io.hpp"
#include "aqi/error.hpp"
#include "doctest.h"

using namespace aqi;

namespace {

std::string field_of(const std::string& text) {
    try {
        config_from_json(text);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::validation);
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("empty document gives the default driver") {
    const auto c = config_from_json("{}");
    const auto d = default_config();
    CHECK(c.omega == d.omega);
    CHECK(c.E_omega == d.E_omega);
    CHECK(c.epsilon_ratio == d.epsilon_ratio);
    CHECK(c.envelope == Envelope::flat);
    CHECK(c.squeezing.kind == SqueezingKind::squeezed);
    CHECK(c.squeezing.axis == FluctuationAxis::amplitude);
    CHECK(c.time_grid.n_steps == d.time_grid.n_steps);
    CHECK(config_hash(c) == config_hash(d));
}

TEST_CASE("canonical serialization round-trips") {
    auto c = default_config();
    c.phi = 1.25;
    c.epsilon_ratio = 0.015;
    c.envelope = Envelope::sin2;
    c.squeezing = {SqueezingKind::thermal, 3e-7, FluctuationAxis::phase};
    c.n_samples = 9;
    c.rho_coupling = 4.5;
    const auto text = config_to_json(c);
    const auto back = config_from_json(text);
    CHECK(config_to_json(back) == text);
    CHECK(config_hash(back) == config_hash(c));
    CHECK(back.squeezing.kind == SqueezingKind::thermal);
    CHECK(back.squeezing.axis == FluctuationAxis::phase);
    CHECK(back.n_samples == 9);
    auto other = c;
    other.phi = 1.2500001;
    CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("coherent squeezing defaults to zero intensity") {
    const auto c = config_from_json(R"({"squeezing": {"kind": "coherent"}})");
    CHECK(c.squeezing.I_squ == 0.0);
    CHECK(c.squeezing.variance() == 0.0);
}

TEST_CASE("malformed documents name the offending key") {
    CHECK(field_of(R"({"omega": "fast"})") == "omega");
    CHECK(field_of(R"({"bogus": 1})") == "bogus");
    CHECK(field_of(R"({"squeezing": {"kind": "weird"}})") == "squeezing.kind");
    CHECK(field_of(R"({"squeezing": {"colour": 1}})") == "squeezing.colour");
    CHECK(field_of(R"({"time_grid": {"n_steps": -3}})") == "time_grid.n_steps");
    CHECK(field_of(R"({"envelope": "gauss"})") == "envelope");
    CHECK(field_of("{not json") == "config");
}

TEST_CASE("missing config file is an io error") {
    try {
        load_config("/nonexistent/aqi.json");
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io);
    }
}

TEST_CASE("parsing does not validate ranges") {
    const auto c = config_from_json(R"({"epsilon_ratio": 0.5})");
    CHECK(c.epsilon_ratio == 0.5);
    CHECK_THROWS_AS(validate(c), Error);
}
