#pragma once

// The SU(2) coin: parameter triple (theta, xi, zeta), its matrix
//
//     C(theta, xi, zeta) = [  e^{i xi} cos(theta)    e^{i zeta} sin(theta) ]
//                          [ -e^{-i zeta} sin(theta) e^{-i xi}  cos(theta) ]
//
// in the (down, up) coin basis, and the canonicalization of parameters into
// theta in [0, pi/2], xi, zeta in (-pi, pi] without changing the matrix.

#include <cmath>
#include <stdexcept>

#include "common.hpp"
#include "rng.hpp"

namespace qwse {

struct CoinParams {
    double theta = 0.0;
    double xi = 0.0;
    double zeta = 0.0;

    CoinParams() = default;

    /// Any finite angles are accepted and normalized into the canonical
    /// ranges. The normalization maps parameters to an equivalent triple
    /// generating the *same* matrix:
    ///   theta < 0        : (theta, xi, zeta) -> (-theta, xi, zeta + pi)
    ///   theta > pi/2     : (theta, xi, zeta) -> (pi - theta, xi + pi, zeta)
    CoinParams(double theta_, double xi_, double zeta_) {
        theta = wrap_angle(theta_);
        xi = xi_;
        zeta = zeta_;
        if (theta < 0.0) {
            theta = -theta;
            zeta += pi;
        }
        if (theta > pi / 2.0) {
            theta = pi - theta;
            xi += pi;
        }
        xi = wrap_angle(xi);
        zeta = wrap_angle(zeta);
    }
};

/// Build the coin matrix from parameters (always special unitary).
inline Mat2 coin_matrix(const CoinParams& p) {
    const double ct = std::cos(p.theta);
    const double st = std::sin(p.theta);
    const cdouble exi = std::polar(1.0, p.xi);
    const cdouble eze = std::polar(1.0, p.zeta);
    return {exi * ct, eze * st, -std::conj(eze) * st, std::conj(exi) * ct};
}

/// Recover canonical CoinParams from a special-unitary matrix of the coin
/// form. Degenerate phases (vanishing cos or sin) are fixed to zero.
inline CoinParams coin_params_of(const Mat2& m, double tol = 1e-12) {
    if (!is_special_unitary(m, 1e-10))
        throw std::invalid_argument("coin_params_of: matrix is not special unitary");
    const double theta = std::atan2(std::abs(m.b), std::abs(m.a));
    const double xi = std::abs(m.a) > tol ? std::arg(m.a) : 0.0;
    const double zeta = std::abs(m.b) > tol ? std::arg(m.b) : 0.0;
    return CoinParams(theta, xi, zeta);
}

/// Haar-random SU(2) element in coin parametrization: cos^2(theta) uniform,
/// phases uniform.
inline CoinParams random_coin(Rng& rng) {
    const double theta = std::acos(std::sqrt(rng.uniform()));
    return CoinParams(theta, rng.uniform(-pi, pi), rng.uniform(-pi, pi));
}

}  // namespace qwse
