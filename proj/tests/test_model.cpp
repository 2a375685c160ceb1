#include <doctest.h>

#include "aruc/errors.hpp"
#include "aruc/model.hpp"

using namespace aruc;

TEST_CASE("builtin scarf matches its published data") {
    UCInstance inst = builtin_instance("scarf");
    CHECK(inst.num_generators() == 8);
    CHECK(inst.num_nodes() == 5);
    CHECK(inst.periods == 1);
    CHECK(inst.total_load(0) == doctest::Approx(40.0));
    CHECK(inst.generators[0].commit_cost == 53.0);
    CHECK(inst.generators[2].energy_cost == 2.0);
    CHECK(inst.generators[2].cap_max == 7.0);
    CHECK(inst.uncertainty.gamma_q[0] == 20.0);
    CHECK(inst.uncertainty.delta_p[0] == 0.0);

    UCInstance cap = builtin_instance("scarf-capacity");
    // Stored as the interval half-width matching the published results.
    CHECK(cap.uncertainty.delta_p[0] == 0.25);
}

TEST_CASE("builtin chen-multiperiod matches its published data") {
    UCInstance inst = builtin_instance("chen-multiperiod");
    CHECK(inst.periods == 3);
    CHECK(inst.num_generators() == 2);
    CHECK(inst.generators[1].startup_cost == 1000.0);
    CHECK(inst.generators[1].no_load_cost == 30.0);
    CHECK(inst.generators[1].cap_min == 20.0);
    CHECK(inst.generators[1].cap_max == 35.0);
    CHECK(inst.generators[1].startup_rate == 22.5);
    CHECK_FALSE(inst.generators[1].initial_on);
    CHECK(inst.total_load(0) == doctest::Approx(95.0));
    CHECK(inst.total_load(1) == doctest::Approx(100.0));
    CHECK(inst.total_load(2) == doctest::Approx(130.0));
    CHECK(inst.uncertainty.gamma_q == std::vector<double>{10.0, 10.0, 2.0});
    CHECK(inst.uncertainty.delta_p == std::vector<double>{0.0, 7.5, 0.5});
}

TEST_CASE("unknown builtin raises a lookup error") {
    CHECK_THROWS_AS(builtin_instance("unknown"), LookupError);
}

TEST_CASE("document round-trips through serialize/load") {
    for (const auto& name : builtin_names()) {
        UCInstance a = builtin_instance(name);
        UCInstance b = load_instance(serialize_instance(a));
        CHECK(serialize_instance(a) == serialize_instance(b));
    }
}

TEST_CASE("degenerate but legal single-generator document") {
    const char* doc = R"({
        "periods": 1,
        "generators": [{"id": "g", "energy_cost": 1.0, "cap_max": 5.0}],
        "demand_nodes": [{"id": "d", "expected_load": [0.0]}],
        "uncertainty": {"norm": "L1", "gamma_q": [0.0], "delta_p": [0.0]}
    })";
    UCInstance inst = load_instance(doc);
    CHECK(inst.num_generators() == 1);
    CHECK(inst.total_load(0) == 0.0);
}

TEST_CASE("schema violations name the field") {
    CHECK_THROWS_WITH_AS(load_instance(R"({"generators": []})"),
                         doctest::Contains("periods"), ParseError);
    const char* missing_cost = R"({
        "periods": 1,
        "generators": [{"id": "g", "cap_max": 5.0}],
        "demand_nodes": [{"id": "d", "expected_load": [1.0]}],
        "uncertainty": {"norm": "L1", "gamma_q": [0.0], "delta_p": [0.0]}
    })";
    CHECK_THROWS_WITH_AS(load_instance(missing_cost), doctest::Contains("energy_cost"),
                         ParseError);
}

TEST_CASE("invariant violations name the rule") {
    const char* crossed = R"({
        "periods": 1,
        "generators": [{"id": "g", "energy_cost": 1.0, "cap_max": 5.0, "cap_min": 6.0}],
        "demand_nodes": [{"id": "d", "expected_load": [1.0]}],
        "uncertainty": {"norm": "L1", "gamma_q": [0.0], "delta_p": [0.0]}
    })";
    CHECK_THROWS_WITH_AS(load_instance(crossed), doctest::Contains("cap_min"), ValidationError);
}

TEST_CASE("realization membership test") {
    UCInstance inst = builtin_instance("scarf");
    RealizationVector r;
    r.load_residual = {{20.0, 0.0, 0.0, 0.0, 0.0}};
    r.capacity_residual = {{0, 0, 0, 0, 0, 0, 0, 0}};
    CHECK(r.within(inst));
    r.load_residual = {{20.0, 0.1, 0.0, 0.0, 0.0}};
    CHECK_FALSE(r.within(inst));
}
