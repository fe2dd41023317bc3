#pragma once

// Phase-space view of SCS cat states on the sphere: the SCS-based Husimi-like
// Q function Q_j = |q_+ + sign_j q_-|^2 / 2 with q_pm(s,a,b) = <s,a,b|s,±t,0>,
// its incoherent baseline and interference term, the coherence ratio, a
// closed-form hypergeometric cross-check, spherical quadrature, interference
// lobe counting, and plot-ready exports.
//
// The primary computation path is always the finite (2s+1)-term direct sum;
// the 2F1 closed form is validation-only. Its two hypergeometric arguments
// have reciprocal magnitudes, so the series representation converges for at
// most one of them; on the operational domain |tan(a/2) tan(t/2)| < 1 the
// second 2F1 is carried across by the standard z -> 1/z connection formula,
// with the branch of u^{-s} fixed by the unwrapped argument
// arg(u) = -beta + pi*[sign < 0] (validated against the direct sum).

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "common.hpp"
#include "targets.hpp"

namespace qwse {

/// <s, alpha, beta | s, theta, phi>: conjugated Eq.-(3) amplitudes summed
/// against Eq.-(3) amplitudes — the oracle path for everything in this file.
inline cdouble scs_overlap(double s, double alpha, double beta, double theta, double phi) {
    const std::vector<cdouble> bra = scs_amplitudes(SCSParams(s, alpha, beta));
    const std::vector<cdouble> ket = scs_amplitudes(SCSParams(s, theta, phi));
    cdouble sum = 0.0;
    for (std::size_t i = 0; i < bra.size(); ++i) sum += std::conj(bra[i]) * ket[i];
    return sum;
}

struct SphericalGrid {
    std::vector<double> alpha;  ///< strictly increasing, within [0, pi]
    std::vector<double> beta;   ///< strictly increasing, within [0, 2*pi)

    SphericalGrid(std::vector<double> alpha_, std::vector<double> beta_)
        : alpha(std::move(alpha_)), beta(std::move(beta_)) {
        auto check = [](const std::vector<double>& v, double lo, double hi, const char* name) {
            if (v.empty()) throw std::invalid_argument(std::string("SphericalGrid: empty ") + name);
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!(v[i] >= lo) || !(v[i] <= hi))
                    throw std::invalid_argument(std::string("SphericalGrid: ") + name +
                                                " sample out of range");
                if (i > 0 && !(v[i] > v[i - 1]))
                    throw std::invalid_argument(std::string("SphericalGrid: ") + name +
                                                " samples must be strictly increasing");
            }
        };
        check(alpha, 0.0, pi, "alpha");
        check(beta, 0.0, 2.0 * pi, "beta");
        if (!beta.empty() && beta.back() >= 2.0 * pi)
            throw std::invalid_argument("SphericalGrid: beta is half-open, samples must be < 2*pi");
    }

    /// Uniform grid: alpha spans [0, pi] inclusive, beta spans [0, 2*pi) half-open.
    static SphericalGrid uniform(int n_alpha, int n_beta) {
        if (n_alpha < 2 || n_beta < 2)
            throw std::invalid_argument("SphericalGrid: need at least 2 samples per axis");
        std::vector<double> a(static_cast<std::size_t>(n_alpha));
        for (int i = 0; i < n_alpha; ++i)
            a[static_cast<std::size_t>(i)] = pi * static_cast<double>(i) / (n_alpha - 1);
        std::vector<double> b(static_cast<std::size_t>(n_beta));
        for (int i = 0; i < n_beta; ++i)
            b[static_cast<std::size_t>(i)] = 2.0 * pi * static_cast<double>(i) / n_beta;
        return SphericalGrid(std::move(a), std::move(b));
    }

    std::size_t size() const { return alpha.size() * beta.size(); }
};

enum class FieldKind { q, q_incoherent, interference, coherence_ratio };

struct QField {
    SphericalGrid grid;
    std::vector<double> values;  ///< row-major: index = i_alpha * beta.size() + i_beta
    FieldKind kind = FieldKind::q;
    int sign_j = 0;                 ///< +1 for j=1, -1 for j=2, 0 when not applicable
    std::size_t masked_count = 0;   ///< ratio fields: points masked to NaN

    double at(std::size_t i_alpha, std::size_t i_beta) const {
        return values[i_alpha * grid.beta.size() + i_beta];
    }
};

namespace detail {

inline int sign_of_j(int j) {
    if (j == 1) return +1;
    if (j == 2) return -1;
    throw std::invalid_argument("phase-space fields take j = 1 or j = 2");
}

template <typename F>
QField evaluate_field(const SphericalGrid& grid, FieldKind kind, int sign_j, double s,
                      double theta, F&& point_value) {
    QField field{grid, {}, kind, sign_j, 0};
    field.values.reserve(grid.size());
    for (double a : grid.alpha)
        for (double b : grid.beta) {
            const cdouble qp = scs_overlap(s, a, b, theta, 0.0);
            const cdouble qm = scs_overlap(s, a, b, -theta, 0.0);
            field.values.push_back(point_value(qp, qm));
        }
    return field;
}

}  // namespace detail

/// Q_j(alpha, beta) = |q_+ + sign_j q_-|^2 / 2, j = 1 (+) or 2 (-).
inline QField husimi_q(int j, const SphericalGrid& grid, double s = 2.5, double theta = pi / 2.0) {
    const int sign = detail::sign_of_j(j);
    return detail::evaluate_field(grid, FieldKind::q, sign, s, theta,
                                  [sign](cdouble qp, cdouble qm) {
                                      return 0.5 * std::norm(qp + static_cast<double>(sign) * qm);
                                  });
}

/// Q_inc = (|q_+|^2 + |q_-|^2) / 2: the Q function of the even, incoherent
/// mixture of the two SCSs.
inline QField q_incoherent(const SphericalGrid& grid, double s = 2.5, double theta = pi / 2.0) {
    return detail::evaluate_field(grid, FieldKind::q_incoherent, 0, s, theta,
                                  [](cdouble qp, cdouble qm) {
                                      return 0.5 * (std::norm(qp) + std::norm(qm));
                                  });
}

/// Interference term Re[q_+ conj(q_-)]; pointwise Q_j = Q_inc + sign_j * this.
inline QField interference_term(const SphericalGrid& grid, double s = 2.5,
                                double theta = pi / 2.0) {
    return detail::evaluate_field(grid, FieldKind::interference, 0, s, theta,
                                  [](cdouble qp, cdouble qm) {
                                      return (qp * std::conj(qm)).real();
                                  });
}

/// Q_j / Q_inc, the deviation-from-incoherence ratio. Points where
/// Q_inc <= 1e-12 are masked to quiet NaN and tallied in masked_count.
inline QField coherence_ratio(int j, const SphericalGrid& grid, double s = 2.5,
                              double theta = pi / 2.0) {
    const int sign = detail::sign_of_j(j);
    QField field = detail::evaluate_field(
        grid, FieldKind::coherence_ratio, sign, s, theta, [sign](cdouble qp, cdouble qm) {
            const double inc = 0.5 * (std::norm(qp) + std::norm(qm));
            const double q = 0.5 * std::norm(qp + static_cast<double>(sign) * qm);
            if (inc <= 1e-12) return std::numeric_limits<double>::quiet_NaN();
            return q / inc;
        });
    for (double v : field.values)
        if (std::isnan(v)) ++field.masked_count;
    return field;
}

// ---------------------------------------------------------------------------
// Closed-form cross-check.
// ---------------------------------------------------------------------------

namespace detail {

/// Power series of 2F1(a, b; c; z); relative term tolerance 1e-14, capped at
/// 1e4 terms (throws if the cap is hit before convergence).
inline cdouble hyp2f1_series(double a, double b, double c, cdouble z) {
    cdouble term = 1.0, total = 1.0;
    for (int n = 0; n < 10000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        total += term;
        if (!std::isfinite(std::abs(term)) || !std::isfinite(std::abs(total)))
            throw std::runtime_error("hyp2f1_series: series diverged");
        if (std::abs(term) <= 1e-14 * std::abs(total)) return total;
    }
    throw std::runtime_error("hyp2f1_series: no convergence within 1e4 terms");
}

}  // namespace detail

/// The supplementary closed form for q_pm(s, alpha, beta) at phi = 0:
///   (+-1)^s Gamma(2s+1)/Gamma(s+1)^2 (S_a C_a S_t C_t)^s
///     [ 2F1(1,-s;s+1; -u) + 2F1(1,-s;s+1; -1/u) - 1 ],   u = sign e^{-i beta} T_a T_t.
/// Validation-only path; the two arguments have reciprocal magnitudes, so the
/// second 2F1 is evaluated through the z -> 1/z connection formula. Branches:
/// (+-1)^s = e^{i pi s [sign<0]} and u^{-s} uses arg(u) = -beta + pi [sign<0]
/// unwrapped (not reduced mod 2*pi). Requires |tan(alpha/2) tan(theta/2)| < 1.
inline cdouble closed_form_q(double s, double alpha, double beta, double theta, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("closed_form_q: sign must be +-1");
    const double two_s = 2.0 * s;
    if (!(two_s >= 0.0) || std::abs(two_s - std::round(two_s)) > 1e-9)
        throw std::invalid_argument("closed_form_q: 2s must be a nonnegative integer");
    const double ca = std::cos(alpha / 2.0), sa = std::sin(alpha / 2.0);
    const double ct = std::cos(theta / 2.0), st = std::sin(theta / 2.0);
    if (sa < 0.0 || st < 0.0)
        throw std::domain_error("closed_form_q: requires alpha and theta in [0, pi]");
    if (ca == 0.0 || ct == 0.0 || std::abs((sa / ca) * (st / ct)) >= 1.0)
        throw std::domain_error("closed_form_q: |tan(alpha/2) tan(theta/2)| >= 1");
    const double r = (sa / ca) * (st / ct);

    const double sgn = static_cast<double>(sign);
    const cdouble pm = (sign < 0) ? std::polar(1.0, pi * s) : cdouble(1.0);
    const double gamma_ratio = std::exp(std::lgamma(two_s + 1.0) - 2.0 * std::lgamma(s + 1.0));
    const cdouble pref = pm * gamma_ratio * std::pow(sa * ca * st * ct, s);

    const cdouble u = sgn * std::polar(r, -beta);
    const cdouble f1 = detail::hyp2f1_series(1.0, -s, s + 1.0, -u);
    const cdouble g = detail::hyp2f1_series(1.0, 1.0 - s, s + 2.0, -u);
    // Connection term for 2F1(1,-s;s+1;-1/u). Its Gamma factor cancels
    // against the prefactor, leaving pm (C_a C_t)^{2s} u^{-s}|_{branch}
    // (1+u)^{2s}; folding the cancellation in keeps alpha -> 0 finite.
    const double arg_u = -beta + ((sign < 0) ? pi : 0.0);
    const cdouble tail =
        pm * std::polar(std::pow(ca * ct, two_s), -s * arg_u) * std::pow(1.0 + u, two_s);
    return pref * (f1 - 1.0 - s / (s + 1.0) * u * g) + tail;
}

// ---------------------------------------------------------------------------
// Quadrature and lobe structure.
// ---------------------------------------------------------------------------

struct GaussLegendreRule {
    std::vector<double> nodes;    ///< on (-1, 1), ascending
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline GaussLegendreRule gauss_legendre_nodes(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_nodes: n must be >= 1");
    GaussLegendreRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

/// (2s+1)/(4 pi) * integral of Q_j over the sphere, by Gauss-Legendre in
/// cos(alpha) x uniform trapezoid in the periodic beta. Equals 1 for a true
/// Q function (SCS resolution of the identity).
inline double husimi_normalization(int j, double s = 2.5, double theta = pi / 2.0,
                                   int n_alpha = 128, int n_beta = 256) {
    const int sign = detail::sign_of_j(j);
    const GaussLegendreRule rule = gauss_legendre_nodes(n_alpha);
    double integral = 0.0;
    const double dbeta = 2.0 * pi / n_beta;
    for (int i = 0; i < n_alpha; ++i) {
        const double alpha = std::acos(rule.nodes[static_cast<std::size_t>(i)]);
        double ring = 0.0;
        for (int k = 0; k < n_beta; ++k) {
            const double beta = dbeta * k;
            const cdouble qp = scs_overlap(s, alpha, beta, theta, 0.0);
            const cdouble qm = scs_overlap(s, alpha, beta, -theta, 0.0);
            ring += 0.5 * std::norm(qp + static_cast<double>(sign) * qm);
        }
        integral += rule.weights[static_cast<std::size_t>(i)] * ring * dbeta;
    }
    return (2.0 * s + 1.0) / (4.0 * pi) * integral;
}

/// Count the interference lobes of the cat built from |s,±theta,0>. The
/// lobes live on the great circle equidistant from the two SCS directions
/// (the x = 0 meridian for phi = 0): circle parameter nu maps to
/// (alpha, beta) = (nu, pi/2) for nu in [0, pi] and (2 pi - nu, 3 pi/2)
/// beyond. Counts strict local maxima of |Re[q_+ q_-^*]| over a wraparound
/// nu-grid, collapsing plateau runs to a single lobe. Equals 4s.
inline int interference_lobes(double s, int n_points = 720, double theta = pi / 2.0) {
    if (n_points < 720)
        throw std::invalid_argument("interference_lobes: need at least 720 sample points");
    std::vector<double> mag(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double nu = 2.0 * pi * i / n_points;
        const double alpha = (nu <= pi) ? nu : 2.0 * pi - nu;
        const double beta = (nu <= pi) ? pi / 2.0 : 3.0 * pi / 2.0;
        const cdouble qp = scs_overlap(s, alpha, beta, theta, 0.0);
        const cdouble qm = scs_overlap(s, alpha, beta, -theta, 0.0);
        mag[static_cast<std::size_t>(i)] = std::abs((qp * std::conj(qm)).real());
    }
    const std::size_t n = mag.size();
    auto prev = [n](std::size_t i) { return (i + n - 1) % n; };
    auto next = [n](std::size_t i) { return (i + 1) % n; };
    int lobes = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mag[prev(i)] == mag[i]) continue;  // not the start of a run
        std::size_t end = i;
        while (mag[next(end)] == mag[i] && next(end) != i) end = next(end);
        if (mag[prev(i)] < mag[i] && mag[next(end)] < mag[i]) ++lobes;
    }
    return lobes;
}

// ---------------------------------------------------------------------------
// Export.
// ---------------------------------------------------------------------------

struct PolarPoint {
    double x, y, z, value;
};

/// Map each grid point to Cartesian coordinates scaled by the field value:
/// (v sin a cos b, v sin a sin b, v cos a, v). One row per grid point,
/// row-major like QField::values.
inline std::vector<PolarPoint> export_polar(const QField& field) {
    std::vector<PolarPoint> rows;
    rows.reserve(field.values.size());
    for (std::size_t i = 0; i < field.grid.alpha.size(); ++i)
        for (std::size_t k = 0; k < field.grid.beta.size(); ++k) {
            const double a = field.grid.alpha[i], b = field.grid.beta[k];
            const double v = field.at(i, k);
            rows.push_back({v * std::sin(a) * std::cos(b), v * std::sin(a) * std::sin(b),
                            v * std::cos(a), v});
        }
    return rows;
}

/// CSV with header `alpha,beta,value`, radians, 17 significant digits.
inline void write_field_csv(const QField& field, std::ostream& os) {
    os << "alpha,beta,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < field.grid.alpha.size(); ++i)
        for (std::size_t k = 0; k < field.grid.beta.size(); ++k)
            os << field.grid.alpha[i] << ',' << field.grid.beta[k] << ',' << field.at(i, k)
               << '\n';
}

/// CSV with header `x,y,z,value`, 17 significant digits.
inline void write_polar_csv(const QField& field, std::ostream& os) {
    os << "x,y,z,value\n" << std::setprecision(17);
    for (const PolarPoint& p : export_polar(field))
        os << p.x << ',' << p.y << ',' << p.z << ',' << p.value << '\n';
}

}  // namespace qwse
