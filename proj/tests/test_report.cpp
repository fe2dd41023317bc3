// Run reports: JSON serialization, byte-identical round-trips, schema
// tolerance for unknown fields, and the [re, im] amplitude encoding.

#include <catch2/catch_amalgamated.hpp>

#include <cctype>
#include <string>
#include <vector>

#include <qwse/qwse.hpp>

using namespace qwse;

namespace {

/// A fully populated report built from real library objects.
RunReport make_report() {
    const Lattice lat5(5);
    RunReport report;
    report.target_spec = "cat:phi=0";
    report.lattice = lat5;

    report.result.coins = {CoinParams(0.1, 0.2, 0.3), CoinParams(0.4, -0.5, 0.6),
                           CoinParams(0.7, 0.8, -0.9), CoinParams(1.0, 1.1, 1.2),
                           CoinParams(1.3, -1.4, 1.5)};
    report.result.fidelity = 0.99999;
    report.result.probability = 0.5;
    report.result.best_start_index = 3;
    report.result.iterations_used = 1234;
    report.result.seed = (1ULL << 63) + 5;  // exercises full uint64 range
    report.result.below_threshold = false;

    OpticsReport optics;
    optics.circuit = compile(report.result.coins, QPlateParams(pi, 0.25, 0.5));
    optics.fidelity_vs_ideal = 1.0;
    optics.probability = 0.5;
    report.optics = optics;

    report.basis_probabilities = {0.9, 0.05, 0.05, 0.0, 0.0, 0.0, 0.0};

    SimEstimateReport sim;
    sim.shots = 10000;
    sim.counts = {9000, 500, 500, 0, 0, 0, 0};
    sim.f_hat = 0.9;
    sim.sigma = 0.003;
    sim.resamples = 200;
    sim.seed = 77;
    report.sim_estimate = sim;

    report.timestamp = "2026-08-14T12:00:00Z";
    report.master_seed = 20260814;
    return report;
}

}  // namespace

TEST_CASE("serialize -> parse -> serialize is byte identical") {
    const RunReport report = make_report();
    const std::string first = serialize_report(report);
    const RunReport parsed = report_from_json(ordered_json::parse(first));
    const std::string second = serialize_report(parsed);
    REQUIRE(first == second);
}

TEST_CASE("round trip without the optional sections") {
    RunReport report = make_report();
    report.optics.reset();
    report.sim_estimate.reset();
    const std::string first = serialize_report(report);
    const RunReport parsed = report_from_json(ordered_json::parse(first));
    REQUIRE(serialize_report(parsed) == first);
    CHECK_FALSE(parsed.optics.has_value());
    CHECK_FALSE(parsed.sim_estimate.has_value());
}

TEST_CASE("parsed fields survive the trip") {
    const RunReport report = make_report();
    const RunReport parsed =
        report_from_json(ordered_json::parse(serialize_report(report)));
    CHECK(parsed.schema == 1);
    CHECK(parsed.target_spec == report.target_spec);
    CHECK(parsed.lattice == report.lattice);
    CHECK(parsed.result.seed == report.result.seed);
    CHECK(parsed.result.iterations_used == 1234);
    REQUIRE(parsed.result.coins.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(parsed.result.coins[i].theta == report.result.coins[i].theta);
        CHECK(parsed.result.coins[i].xi == report.result.coins[i].xi);
        CHECK(parsed.result.coins[i].zeta == report.result.coins[i].zeta);
    }
    REQUIRE(parsed.optics.has_value());
    CHECK(parsed.optics->circuit.steps.size() == 5);
    CHECK(parsed.optics->circuit.compensation.size() == 1);
    REQUIRE(parsed.sim_estimate.has_value());
    CHECK(parsed.sim_estimate->counts == report.sim_estimate->counts);
    CHECK(parsed.master_seed == report.master_seed);
    CHECK(parsed.tool_version == std::string(version));
}

TEST_CASE("unknown fields are ignored on read") {
    ordered_json j = ordered_json::parse(serialize_report(make_report()));
    j["future_extension"] = {{"nested", true}};
    j["result"]["another_future_field"] = 17;
    const RunReport parsed = report_from_json(j);
    CHECK(parsed.target_spec == "cat:phi=0");
    CHECK(parsed.result.best_start_index == 3);
}

TEST_CASE("missing required fields are an error") {
    ordered_json j = ordered_json::parse(serialize_report(make_report()));
    j.erase("result");
    CHECK_THROWS(report_from_json(j));
    ordered_json j2 = ordered_json::parse(serialize_report(make_report()));
    j2["result"].erase("fidelity");
    CHECK_THROWS(report_from_json(j2));
}

TEST_CASE("amplitudes serialize as [re, im] pairs") {
    const ordered_json j = report_to_json(make_report());
    const auto& projection = j["optics"]["projection"];
    REQUIRE(projection.is_array());
    REQUIRE(projection.size() == 2);
    REQUIRE(projection[0].is_array());
    REQUIRE(projection[0].size() == 2);
    CHECK(projection[0][0].get<double>() == Catch::Approx(1.0 / std::sqrt(2.0)));
    CHECK(projection[0][1].get<double>() == 0.0);
    // Key order is stable: schema first, then the payload.
    CHECK(j.begin().key() == "schema");
}

TEST_CASE("timestamps are ISO 8601 UTC") {
    const std::string ts = iso8601_utc_now();
    REQUIRE(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[7] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts[13] == ':');
    CHECK(ts[16] == ':');
    CHECK(ts.back() == 'Z');
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u, 17u, 18u})
        CHECK(std::isdigit(static_cast<unsigned char>(ts[i])));
}
