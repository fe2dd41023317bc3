#pragma once

// Shared numeric primitives: complex aliases, a minimal 2x2 complex matrix /
// 2-vector algebra (the coin space), angle canonicalization, and the error
// types thrown across the library.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qwse {

using cdouble = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Thrown when a requested target cannot be engineered on the given lattice
/// (dimension/parity mismatch, zero-norm amplitude vector, ...).
struct infeasible_target_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a physical-compilation request is outside the supported
/// regime (e.g. a Q-plate not tuned to full conversion).
struct unsupported_configuration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Wrap an angle into the canonical interval (-pi, pi].
inline double wrap_angle(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("wrap_angle: non-finite angle");
    double y = std::fmod(x, 2.0 * pi);
    if (y <= -pi) y += 2.0 * pi;
    if (y > pi) y -= 2.0 * pi;
    return y;
}

/// Wrap a waveplate fast-axis orientation into [0, pi); retarders are
/// pi-periodic in their axis angle.
inline double wrap_axis(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("wrap_axis: non-finite angle");
    double y = std::fmod(x, pi);
    if (y < 0) y += pi;
    // fmod can land exactly on pi after the correction when x is a tiny
    // negative number; fold that case back to 0.
    if (y >= pi) y = 0.0;
    return y;
}

/// Coin-space 2-vector, component order (down, up).
struct Vec2 {
    cdouble down{};
    cdouble up{};

    double squared_norm() const { return std::norm(down) + std::norm(up); }
};

inline cdouble inner(const Vec2& a, const Vec2& b) {
    return std::conj(a.down) * b.down + std::conj(a.up) * b.up;
}

/// Dense 2x2 complex matrix in the (down, up) coin basis.
struct Mat2 {
    // Row-major entries: [[a, b], [c, d]].
    cdouble a{}, b{}, c{}, d{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

    cdouble det() const { return a * d - b * c; }

    cdouble trace() const { return a + d; }

    Vec2 operator*(const Vec2& v) const {
        return {a * v.down + b * v.up, c * v.down + d * v.up};
    }

    Mat2 operator*(const Mat2& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d,
                c * m.a + d * m.c, c * m.b + d * m.d};
    }

    Mat2 operator*(cdouble s) const { return {s * a, s * b, s * c, s * d}; }

    Mat2 operator-(const Mat2& m) const { return {a - m.a, b - m.b, c - m.c, d - m.d}; }

    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }
};

/// Entrywise unitarity check: M^dagger M = I within `tol`.
inline bool is_unitary(const Mat2& m, double tol = 1e-12) {
    Mat2 g = m.adjoint() * m;
    return (g - Mat2::identity()).max_abs() <= tol;
}

/// Special-unitary check: unitary and det = 1 within `tol`.
inline bool is_special_unitary(const Mat2& m, double tol = 1e-12) {
    return is_unitary(m, tol) && std::abs(m.det() - 1.0) <= tol;
}

}  // namespace qwse
