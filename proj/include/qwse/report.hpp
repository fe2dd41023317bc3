#pragma once

// Machine-readable run reports. JSON via nlohmann::ordered_json so key order
// is fixed and serialize -> parse -> serialize is byte-identical. Complex
// amplitudes are [re, im] pairs; angles are radians. The schema is versioned
// and readers ignore unknown fields.

#include <cstdint>
#include <ctime>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coin.hpp"
#include "common.hpp"
#include "lattice.hpp"
#include "measure.hpp"
#include "optimize.hpp"
#include "photonic.hpp"
#include "version.hpp"

namespace qwse {

using ordered_json = nlohmann::ordered_json;

struct SimEstimateReport {
    std::int64_t shots = 0;
    std::vector<std::int64_t> counts;  ///< per Gram-Schmidt bucket, sink last
    double f_hat = 0.0;
    double sigma = 0.0;
    int resamples = 0;
    std::uint64_t seed = 0;
};

struct OpticsReport {
    PhysicalCircuit circuit;
    double fidelity_vs_ideal = 0.0;  ///< physical vs ideal projected state
    double probability = 0.0;        ///< physical post-selection probability
};

struct RunReport {
    int schema = 1;
    std::string target_spec;
    Lattice lattice{1, 1};
    EngineeringResult result;
    std::optional<OpticsReport> optics;
    std::vector<double> basis_probabilities;  ///< target-first basis + sink
    std::optional<SimEstimateReport> sim_estimate;
    std::string tool_version = version;
    std::string timestamp;  ///< ISO 8601 UTC
    std::uint64_t master_seed = 0;
};

inline std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace detail {

inline ordered_json complex_to_json(const cdouble& z) {
    return ordered_json::array({z.real(), z.imag()});
}

inline cdouble complex_from_json(const ordered_json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline ordered_json waveplate_to_json(const WaveplateSetting& wp) {
    ordered_json j;
    j["kind"] = wp.kind == WaveplateKind::QWP ? "QWP" : "HWP";
    j["angle"] = wp.angle;
    return j;
}

inline WaveplateSetting waveplate_from_json(const ordered_json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "QWP" && kind != "HWP")
        throw std::invalid_argument("report: unknown waveplate kind '" + kind + "'");
    return {kind == "QWP" ? WaveplateKind::QWP : WaveplateKind::HWP,
            j.at("angle").get<double>()};
}

}  // namespace detail

inline ordered_json report_to_json(const RunReport& report) {
    ordered_json j;
    j["schema"] = report.schema;
    j["target_spec"] = report.target_spec;
    j["lattice"] = {{"n_steps", report.lattice.n_steps},
                    {"oam_step", report.lattice.oam_step}};

    ordered_json result;
    result["coins"] = ordered_json::array();
    for (const auto& c : report.result.coins)
        result["coins"].push_back({{"theta", c.theta}, {"xi", c.xi}, {"zeta", c.zeta}});
    result["fidelity"] = report.result.fidelity;
    result["probability"] = report.result.probability;
    result["best_start_index"] = report.result.best_start_index;
    result["iterations_used"] = report.result.iterations_used;
    result["seed"] = report.result.seed;
    result["below_threshold"] = report.result.below_threshold;
    j["result"] = std::move(result);

    if (report.optics) {
        ordered_json optics;
        optics["steps"] = ordered_json::array();
        for (const auto& step : report.optics->circuit.steps) {
            ordered_json s;
            s["waveplates"] = ordered_json::array();
            for (const auto& wp : step.waveplates)
                s["waveplates"].push_back(detail::waveplate_to_json(wp));
            s["qplate"] = {{"delta", step.qplate.delta},
                           {"alpha0", step.qplate.alpha0},
                           {"q", step.qplate.q}};
            optics["steps"].push_back(std::move(s));
        }
        optics["compensation"] = ordered_json::array();
        for (const auto& wp : report.optics->circuit.compensation)
            optics["compensation"].push_back(detail::waveplate_to_json(wp));
        optics["projection"] =
            ordered_json::array({detail::complex_to_json(report.optics->circuit.projection.v.down),
                                 detail::complex_to_json(report.optics->circuit.projection.v.up)});
        optics["fidelity_vs_ideal"] = report.optics->fidelity_vs_ideal;
        optics["probability"] = report.optics->probability;
        j["optics"] = std::move(optics);
    }

    j["basis_probabilities"] = report.basis_probabilities;

    if (report.sim_estimate) {
        const auto& sim = *report.sim_estimate;
        j["sim_estimate"] = {{"shots", sim.shots},   {"counts", sim.counts},
                             {"f_hat", sim.f_hat},   {"sigma", sim.sigma},
                             {"resamples", sim.resamples}, {"seed", sim.seed}};
    }

    j["version"] = report.tool_version;
    j["timestamp"] = report.timestamp;
    j["master_seed"] = report.master_seed;
    return j;
}

/// Parse a report, ignoring unknown fields. Missing required fields throw.
inline RunReport report_from_json(const ordered_json& j) {
    RunReport report;
    report.schema = j.at("schema").get<int>();
    report.target_spec = j.at("target_spec").get<std::string>();
    report.lattice = Lattice(j.at("lattice").at("n_steps").get<int>(),
                             j.at("lattice").at("oam_step").get<int>());

    const auto& result = j.at("result");
    for (const auto& c : result.at("coins"))
        report.result.coins.emplace_back(c.at("theta").get<double>(), c.at("xi").get<double>(),
                                         c.at("zeta").get<double>());
    report.result.fidelity = result.at("fidelity").get<double>();
    report.result.probability = result.at("probability").get<double>();
    report.result.best_start_index = result.at("best_start_index").get<int>();
    report.result.iterations_used = result.at("iterations_used").get<long long>();
    report.result.seed = result.at("seed").get<std::uint64_t>();
    report.result.below_threshold = result.at("below_threshold").get<bool>();

    if (j.contains("optics")) {
        const auto& optics = j.at("optics");
        OpticsReport op;
        for (const auto& s : optics.at("steps")) {
            PhysicalStep step;
            for (const auto& wp : s.at("waveplates"))
                step.waveplates.push_back(detail::waveplate_from_json(wp));
            step.qplate = QPlateParams(s.at("qplate").at("delta").get<double>(),
                                       s.at("qplate").at("alpha0").get<double>(),
                                       s.at("qplate").at("q").get<double>());
            op.circuit.steps.push_back(std::move(step));
        }
        for (const auto& wp : optics.at("compensation"))
            op.circuit.compensation.push_back(detail::waveplate_from_json(wp));
        op.circuit.projection =
            CoinKet(detail::complex_from_json(optics.at("projection").at(0)),
                    detail::complex_from_json(optics.at("projection").at(1)));
        op.fidelity_vs_ideal = optics.at("fidelity_vs_ideal").get<double>();
        op.probability = optics.at("probability").get<double>();
        report.optics = std::move(op);
    }

    report.basis_probabilities = j.at("basis_probabilities").get<std::vector<double>>();

    if (j.contains("sim_estimate")) {
        const auto& sim = j.at("sim_estimate");
        SimEstimateReport s;
        s.shots = sim.at("shots").get<std::int64_t>();
        s.counts = sim.at("counts").get<std::vector<std::int64_t>>();
        s.f_hat = sim.at("f_hat").get<double>();
        s.sigma = sim.at("sigma").get<double>();
        s.resamples = sim.at("resamples").get<int>();
        s.seed = sim.at("seed").get<std::uint64_t>();
        report.sim_estimate = std::move(s);
    }

    report.tool_version = j.at("version").get<std::string>();
    report.timestamp = j.at("timestamp").get<std::string>();
    report.master_seed = j.at("master_seed").get<std::uint64_t>();
    return report;
}

inline std::string serialize_report(const RunReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

}  // namespace qwse
