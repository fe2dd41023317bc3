#pragma once

// The discrete-time walk itself: site-wise coin application, the conditional
// shift (down moves k -> k-1, up moves k -> k+1), n-step evolution
// U = Prod_t S . C_t (coin first within each step), and the coin projection
// that post-selects the walker qudit.
//
// A dense-matrix construction of the same n-step unitary is provided as an
// independent oracle for tests.

#include <utility>
#include <vector>

#include "coin.hpp"
#include "common.hpp"
#include "state.hpp"

namespace qwse {

/// Apply one 2x2 coin-space operator at every site. Not restricted to coin
/// matrices; the photonic module reuses it for waveplate Jones matrices.
inline WalkerCoinState apply_coin_operator(const WalkerCoinState& state, const Mat2& m) {
    WalkerCoinState out(state.radius(), state.oam_step());
    const auto& in = state.amplitudes();
    auto& dst = out.amplitudes();
    for (std::size_t i = 0; i < in.size(); i += 2) {
        const cdouble down = in[i], up = in[i + 1];
        dst[i] = m.a * down + m.b * up;
        dst[i + 1] = m.c * down + m.d * up;
    }
    return out;
}

inline WalkerCoinState apply_coin(const WalkerCoinState& state, const CoinParams& params) {
    return apply_coin_operator(state, coin_matrix(params));
}

/// Conditional shift: (k, down) -> (k-1, down), (k, up) -> (k+1, up). The
/// lattice grows by one site on each side, so nothing is ever truncated.
inline WalkerCoinState apply_shift(const WalkerCoinState& state) {
    WalkerCoinState out(state.radius() + 1, state.oam_step());
    const auto& in = state.amplitudes();
    auto& dst = out.amplitudes();
    // In flat storage the down components keep their offset and the up
    // components move four slots (two sites' worth) forward.
    for (std::size_t i = 0; i < in.size(); i += 2) {
        dst[i] = in[i];
        dst[i + 1 + 4] = in[i + 1];
    }
    return out;
}

/// n-step evolution: for each t, coin C_t then shift.
inline WalkerCoinState evolve(WalkerCoinState state, const std::vector<CoinParams>& coins) {
    if (coins.empty()) throw std::invalid_argument("evolve: empty coin sequence");
    for (const auto& c : coins) state = apply_shift(apply_coin(state, c));
    return state;
}

/// Project the coin onto `ket`; returns the renormalized conditional walker
/// qudit on the parity lattice plus the post-selection probability
/// p = |(I (x) <ket|) |state>|^2.
///
/// The state must respect the parity invariant (its off-parity amplitude is
/// required to vanish), which holds exactly for anything produced by evolve
/// from a single site.
inline std::pair<WalkerState, double> project_coin(const WalkerCoinState& state,
                                                   const CoinKet& ket) {
    if (state.off_parity_mass() > 1e-12)
        throw std::invalid_argument("project_coin: state violates the lattice parity invariant");
    const Lattice lattice(state.radius(), state.oam_step());
    std::vector<cdouble> proj(static_cast<std::size_t>(lattice.dim()));
    double p = 0.0;
    for (int i = 0; i < lattice.dim(); ++i) {
        const int k = lattice.site_at(i);
        const cdouble a = std::conj(ket.v.down) * state.at(k, 0) +
                          std::conj(ket.v.up) * state.at(k, 1);
        proj[static_cast<std::size_t>(i)] = a;
        p += std::norm(a);
    }
    if (p < 1e-14)
        throw std::domain_error("project_coin: post-selection probability below 1e-14");
    const double inv = 1.0 / std::sqrt(p);
    for (auto& a : proj) a *= inv;
    return {WalkerState(lattice, std::move(proj)), p};
}

/// Dense-matrix oracle: the full n-step unitary assembled as an explicit
/// matrix product on the space of sites [-radius, radius] x (down, up).
/// `radius` must leave headroom (initial support radius + n) so the shift
/// never reaches the border. Basis index: (site + radius)*2 + coin.
inline std::vector<std::vector<cdouble>> dense_unitary(const std::vector<CoinParams>& coins,
                                                       int radius) {
    const std::size_t n = static_cast<std::size_t>(2 * radius + 1) * 2;
    auto mat_mul = [n](const std::vector<std::vector<cdouble>>& x,
                       const std::vector<std::vector<cdouble>>& y) {
        std::vector<std::vector<cdouble>> z(n, std::vector<cdouble>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const cdouble xik = x[i][k];
                if (xik == cdouble{}) continue;
                for (std::size_t j = 0; j < n; ++j) z[i][j] += xik * y[k][j];
            }
        return z;
    };

    std::vector<std::vector<cdouble>> shift(n, std::vector<cdouble>(n));
    for (int k = -radius; k <= radius; ++k) {
        const std::size_t col_down = static_cast<std::size_t>(k + radius) * 2;
        const std::size_t col_up = col_down + 1;
        if (k - 1 >= -radius) shift[col_down - 2][col_down] = 1.0;
        if (k + 1 <= radius) shift[col_up + 2][col_up] = 1.0;
    }

    std::vector<std::vector<cdouble>> u(n, std::vector<cdouble>(n));
    for (std::size_t i = 0; i < n; ++i) u[i][i] = 1.0;
    for (const auto& params : coins) {
        const Mat2 c = coin_matrix(params);
        std::vector<std::vector<cdouble>> coin(n, std::vector<cdouble>(n));
        for (int k = -radius; k <= radius; ++k) {
            const std::size_t d = static_cast<std::size_t>(k + radius) * 2;
            coin[d][d] = c.a;
            coin[d][d + 1] = c.b;
            coin[d + 1][d] = c.c;
            coin[d + 1][d + 1] = c.d;
        }
        u = mat_mul(shift, mat_mul(coin, u));
    }
    return u;
}

}  // namespace qwse
