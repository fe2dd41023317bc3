#pragma once

// The optical realization of the walk. Coin space lives in circular
// polarization with the fixed mapping L <-> up, R <-> down, so the coin
// basis (down, up) reads (R, L). Jones matrices in that basis and with our
// retardance sign convention:
//
//   QWP(a) = (1/sqrt 2) [[1, -i e^{2ia}], [-i e^{-2ia}, 1]]
//   HWP(a) = -i [[0, e^{2ia}], [e^{-2ia}, 0]]
//
// Both have determinant +1 and are pi-periodic in the fast-axis angle a.
// Every SU(2) coin factors exactly as QWP(gamma) HWP(beta) QWP(alpha).
//
// The q-plate implements, on |L,m> / |R,m> (m = OAM):
//   |L,m> -> cos(d/2)|L,m> + i e^{+2i a0} sin(d/2) |R, m+2q>
//   |R,m> -> cos(d/2)|R,m> + i e^{-2i a0} sin(d/2) |L, m-2q>
// At full conversion (delta = pi) this equals K(a0) . S_ideal, where S_ideal
// is the coin-preserving conditional shift and K(a0) = -HWP(a0) acts on the
// coin alone. The compiler therefore absorbs each plate's K into the next
// step's coin (C~_t = C_t . HWP(a0_{t-1})) and appends one HWP(a0_n) before
// the projection; the compiled circuit then reproduces the ideal walk
// exactly — no global phase left over.

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "coin.hpp"
#include "common.hpp"
#include "state.hpp"
#include "walk.hpp"

namespace qwse {

enum class WaveplateKind { QWP, HWP };

struct WaveplateSetting {
    WaveplateKind kind = WaveplateKind::QWP;
    double angle = 0.0;  ///< fast-axis orientation, canonical range [0, pi)

    WaveplateSetting() = default;
    WaveplateSetting(WaveplateKind k, double a) : kind(k), angle(wrap_axis(a)) {}
};

struct QPlateParams {
    double delta = pi;    ///< tuning (retardation); pi = full conversion
    double alpha0 = 0.0;  ///< plate orientation phase
    double q = 0.5;       ///< topological charge, 2q an integer

    QPlateParams() = default;
    QPlateParams(double delta_, double alpha0_, double q_)
        : delta(delta_), alpha0(alpha0_), q(q_) {
        if (!std::isfinite(delta) || !std::isfinite(alpha0) || !std::isfinite(q))
            throw std::invalid_argument("QPlateParams: parameters must be finite");
        if (std::abs(2.0 * q - std::round(2.0 * q)) > 1e-9)
            throw std::invalid_argument("QPlateParams: 2q must be an integer");
    }
};

struct PhysicalStep {
    std::vector<WaveplateSetting> waveplates;  ///< application order
    QPlateParams qplate;
};

struct PhysicalCircuit {
    std::vector<PhysicalStep> steps;
    std::vector<WaveplateSetting> compensation;  ///< applied after the last step
    CoinKet projection = CoinKet::plus();
};

inline Mat2 jones_qwp(double angle) {
    if (!std::isfinite(angle)) throw std::invalid_argument("jones_qwp: angle must be finite");
    const double r = 1.0 / std::sqrt(2.0);
    const cdouble mi(0.0, -1.0);
    return {r, mi * std::polar(r, 2.0 * angle), mi * std::polar(r, -2.0 * angle), r};
}

inline Mat2 jones_hwp(double angle) {
    if (!std::isfinite(angle)) throw std::invalid_argument("jones_hwp: angle must be finite");
    const cdouble mi(0.0, -1.0);
    return {0.0, mi * std::polar(1.0, 2.0 * angle), mi * std::polar(1.0, -2.0 * angle), 0.0};
}

inline Mat2 jones_matrix(const WaveplateSetting& wp) {
    return wp.kind == WaveplateKind::QWP ? jones_qwp(wp.angle) : jones_hwp(wp.angle);
}

/// Exact QWP-HWP-QWP factorization of the coin C(theta, xi, zeta):
///   alpha = (zeta - xi - pi)/2, beta = (theta + zeta)/2, gamma = (zeta + xi + pi)/2
/// gives QWP(gamma) HWP(beta) QWP(alpha) == C with no residual phase.
/// Returned in application order (the QWP(alpha) element first).
inline std::vector<WaveplateSetting> decompose_coin(const CoinParams& p) {
    return {WaveplateSetting(WaveplateKind::QWP, (p.zeta - p.xi - pi) / 2.0),
            WaveplateSetting(WaveplateKind::HWP, (p.theta + p.zeta) / 2.0),
            WaveplateSetting(WaveplateKind::QWP, (p.zeta + p.xi + pi) / 2.0)};
}

/// Factorization of an arbitrary unitary: the SU(2) part is reproduced
/// exactly, so the stack equals `m` up to the global phase sqrt(det m).
inline std::vector<WaveplateSetting> decompose_coin(const Mat2& m) {
    if (!is_unitary(m, 1e-10)) throw std::invalid_argument("decompose_coin: matrix not unitary");
    const cdouble det = m.det();
    const double phase = std::arg(det) / 2.0;
    const Mat2 su = m * std::polar(1.0, -phase);
    return decompose_coin(coin_params_of(su));
}

/// Eq.-(2) action of a q-plate on a walker-coin state. The OAM transfer 2q
/// must be a whole number of lattice sites (2q / oam_step integral). When the
/// converting component is active (sin(delta/2) != 0) the lattice grows by
/// |hop| sites on both sides so nothing truncates.
inline WalkerCoinState apply_qplate(const WalkerCoinState& state, const QPlateParams& p) {
    const double ratio = 2.0 * p.q / static_cast<double>(state.oam_step());
    const int hop = static_cast<int>(std::llround(ratio));
    if (std::abs(ratio - hop) > 1e-9)
        throw std::invalid_argument(
            "apply_qplate: 2q must be an integer multiple of the lattice OAM step");
    const double c = std::cos(p.delta / 2.0), s = std::sin(p.delta / 2.0);
    const cdouble conv_up = cdouble(0.0, 1.0) * std::polar(s, -2.0 * p.alpha0);   // R -> L
    const cdouble conv_down = cdouble(0.0, 1.0) * std::polar(s, 2.0 * p.alpha0);  // L -> R
    const int grow = (s != 0.0) ? std::abs(hop) : 0;
    const int r_in = state.radius();
    WalkerCoinState out(r_in + grow, state.oam_step());
    for (int k = -r_in; k <= r_in; ++k) {
        const cdouble down = state.at(k, 0), up = state.at(k, 1);
        if (down != cdouble{}) {
            out.at(k, 0) += c * down;
            if (grow != 0) out.at(k - hop, 1) += conv_up * down;
        }
        if (up != cdouble{}) {
            out.at(k, 1) += c * up;
            if (grow != 0) out.at(k + hop, 0) += conv_down * up;
        }
    }
    return out;
}

/// Compile an ideal coin sequence onto waveplates + q-plates. Requires full
/// conversion (delta = pi) and a unit site hop (2q = oam_step); anything else
/// cannot realize the ideal shift and raises unsupported_configuration_error.
/// `oam_step` is the lattice the circuit will run on.
inline PhysicalCircuit compile(const std::vector<CoinParams>& coins,
                               const std::vector<QPlateParams>& qplates,
                               const CoinKet& projection = CoinKet::plus(), int oam_step = 1) {
    if (coins.empty()) throw std::invalid_argument("compile: empty coin sequence");
    if (qplates.size() != coins.size())
        throw std::invalid_argument("compile: need one q-plate per step");
    for (const auto& qp : qplates) {
        if (std::abs(qp.delta - pi) > 1e-12)
            throw unsupported_configuration_error(
                "compile: q-plates must run at full conversion (delta = pi)");
        if (std::abs(2.0 * qp.q - static_cast<double>(oam_step)) > 1e-9)
            throw unsupported_configuration_error(
                "compile: the q-plate OAM transfer 2q must equal the lattice OAM step");
    }
    PhysicalCircuit circuit;
    circuit.projection = projection;
    circuit.steps.reserve(coins.size());
    for (std::size_t t = 0; t < coins.size(); ++t) {
        Mat2 effective = coin_matrix(coins[t]);
        if (t > 0) effective = effective * jones_hwp(qplates[t - 1].alpha0);
        PhysicalStep step;
        step.waveplates = decompose_coin(coin_params_of(effective));
        step.qplate = qplates[t];
        circuit.steps.push_back(std::move(step));
    }
    circuit.compensation = {WaveplateSetting(WaveplateKind::HWP, qplates.back().alpha0)};
    return circuit;
}

inline PhysicalCircuit compile(const std::vector<CoinParams>& coins, const QPlateParams& qplate,
                               const CoinKet& projection = CoinKet::plus(), int oam_step = 1) {
    return compile(coins, std::vector<QPlateParams>(coins.size(), qplate), projection, oam_step);
}

/// Run the optical cascade (waveplates, q-plate per step, compensation) and
/// project the coin; same contract as evolve + project_coin.
inline std::pair<WalkerState, double> simulate_physical(const PhysicalCircuit& circuit,
                                                        const WalkerCoinState& initial) {
    WalkerCoinState state = initial;
    for (const auto& step : circuit.steps) {
        for (const auto& wp : step.waveplates) state = apply_coin_operator(state, jones_matrix(wp));
        state = apply_qplate(state, step.qplate);
    }
    for (const auto& wp : circuit.compensation) state = apply_coin_operator(state, jones_matrix(wp));
    return project_coin(state, circuit.projection);
}

/// Line-oriented text table of a compiled circuit (one element per line).
inline std::string format_circuit_table(const PhysicalCircuit& circuit) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(9);
    auto put_wp = [&](std::size_t step, const WaveplateSetting& wp) {
        os << std::setw(4) << step << "  " << (wp.kind == WaveplateKind::QWP ? "QWP   " : "HWP   ")
           << "angle=" << wp.angle << "\n";
    };
    for (std::size_t t = 0; t < circuit.steps.size(); ++t) {
        for (const auto& wp : circuit.steps[t].waveplates) put_wp(t + 1, wp);
        const auto& qp = circuit.steps[t].qplate;
        os << std::setw(4) << (t + 1) << "  QPLATE delta=" << qp.delta << " alpha0=" << qp.alpha0
           << " q=" << qp.q << "\n";
    }
    for (const auto& wp : circuit.compensation) put_wp(circuit.steps.size() + 1, wp);
    return os.str();
}

}  // namespace qwse
