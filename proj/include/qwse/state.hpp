#pragma once

// State containers.
//
// WalkerCoinState: the joint walker+coin ket during evolution, stored densely
// over sites [-radius, radius] x (down, up). The radius grows by one with
// every shift; amplitudes off the reachable parity sublattice stay exactly
// zero under evolution from a single site.
//
// WalkerState: the d-dimensional qudit living on the parity sites of a
// Lattice, produced by coin projection.

#include <complex>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "lattice.hpp"

namespace qwse {

/// Unit-norm coin ket, component order (down, up).
struct CoinKet {
    Vec2 v{};

    CoinKet() : v{1.0, 0.0} {}
    CoinKet(cdouble down, cdouble up) : v{down, up} {
        if (std::abs(v.squared_norm() - 1.0) > 1e-12)
            throw std::invalid_argument("CoinKet: not unit norm");
    }

    static CoinKet down() { return CoinKet(1.0, 0.0); }
    static CoinKet up() { return CoinKet(0.0, 1.0); }
    /// |+> = (|down> + |up>)/sqrt(2), the preparation and projection ket.
    static CoinKet plus() { return CoinKet(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)); }
    static CoinKet minus() { return CoinKet(1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)); }

    /// Orthogonal partner (up to phase): (-conj(up), conj(down)).
    CoinKet orthogonal() const { return CoinKet(-std::conj(v.up), std::conj(v.down)); }
};

class WalkerCoinState {
  public:
    /// Zero state of the given radius.
    explicit WalkerCoinState(int radius, int oam_step = 1)
        : radius_(radius), oam_step_(oam_step), amp_(checked_amp_count(radius), cdouble{}) {}

    /// Product state |site> (x) |coin|, radius just covering the site.
    static WalkerCoinState localized(int site, const CoinKet& coin, int oam_step = 1) {
        WalkerCoinState s(std::abs(site), oam_step);
        s.at(site, 0) = coin.v.down;
        s.at(site, 1) = coin.v.up;
        return s;
    }

    /// The paper's initial state |0>_w (x) |+>_c.
    static WalkerCoinState initial(int oam_step = 1) {
        return localized(0, CoinKet::plus(), oam_step);
    }

    int radius() const { return radius_; }
    int oam_step() const { return oam_step_; }
    int site_count() const { return 2 * radius_ + 1; }

    /// Amplitude at (site, coin); coin 0 = down, 1 = up.
    cdouble& at(int site, int coin) { return amp_[index(site, coin)]; }
    const cdouble& at(int site, int coin) const { return amp_[index(site, coin)]; }

    const std::vector<cdouble>& amplitudes() const { return amp_; }
    std::vector<cdouble>& amplitudes() { return amp_; }

    double squared_norm() const {
        double n = 0.0;
        for (const auto& a : amp_) n += std::norm(a);
        return n;
    }

    /// Total squared amplitude on sites violating the parity of `radius`.
    double off_parity_mass() const {
        double m = 0.0;
        for (int k = -radius_; k <= radius_; ++k) {
            if ((k + radius_) % 2 == 0) continue;
            m += std::norm(at(k, 0)) + std::norm(at(k, 1));
        }
        return m;
    }

  private:
    static std::size_t checked_amp_count(int radius) {
        if (radius < 0) throw std::invalid_argument("WalkerCoinState: negative radius");
        return static_cast<std::size_t>(2 * (2 * radius + 1));
    }

    std::size_t index(int site, int coin) const {
        if (site < -radius_ || site > radius_)
            throw std::out_of_range("WalkerCoinState: site outside radius");
        return static_cast<std::size_t>(site + radius_) * 2 + static_cast<std::size_t>(coin);
    }

    int radius_;
    int oam_step_;
    std::vector<cdouble> amp_;
};

class WalkerState {
  public:
    WalkerState(Lattice lattice, std::vector<cdouble> amplitudes)
        : lattice_(lattice), amp_(std::move(amplitudes)) {
        if (static_cast<int>(amp_.size()) != lattice_.dim())
            throw std::invalid_argument("WalkerState: amplitude count != lattice dimension");
    }

    const Lattice& lattice() const { return lattice_; }
    int dim() const { return lattice_.dim(); }

    cdouble& operator[](int i) { return amp_[static_cast<std::size_t>(i)]; }
    const cdouble& operator[](int i) const { return amp_[static_cast<std::size_t>(i)]; }

    /// Amplitude on lattice site k (not index).
    const cdouble& at_site(int k) const { return amp_[static_cast<std::size_t>(lattice_.site_index(k))]; }

    const std::vector<cdouble>& amplitudes() const { return amp_; }

    double squared_norm() const {
        double n = 0.0;
        for (const auto& a : amp_) n += std::norm(a);
        return n;
    }

    WalkerState& normalize() {
        const double n = std::sqrt(squared_norm());
        if (n < 1e-12) throw std::invalid_argument("WalkerState: cannot normalize zero vector");
        for (auto& a : amp_) a /= n;
        return *this;
    }

  private:
    Lattice lattice_;
    std::vector<cdouble> amp_;
};

inline cdouble inner(const WalkerState& a, const WalkerState& b) {
    if (!(a.lattice() == b.lattice()))
        throw std::invalid_argument("inner: states live on different lattices");
    cdouble s{};
    for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// State fidelity F = |<a|b>|^2 between pure walker states.
inline double fidelity(const WalkerState& a, const WalkerState& b) {
    return std::norm(inner(a, b));
}

}  // namespace qwse
