#pragma once

// Target-state generators: extremal cat states, spin coherent states (SCS)
// and their superpositions, Fourier-basis states, random states, explicit
// amplitude lists, the built-in catalog of published target amplitudes, and
// the text grammar used by the command line to name a target.

#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "lattice.hpp"
#include "rng.hpp"
#include "state.hpp"

namespace qwse {

/// (|k_max> + e^{i phi} |k_min>) / sqrt(2) on the extremal lattice sites.
inline WalkerState extremal_cat(const Lattice& lattice, double phi) {
    if (lattice.dim() < 2) throw std::invalid_argument("extremal_cat: need at least 2 sites");
    std::vector<cdouble> amps(static_cast<std::size_t>(lattice.dim()));
    const double r = 1.0 / std::sqrt(2.0);
    amps.back() = r;
    amps.front() = std::polar(r, phi);
    return WalkerState(lattice, std::move(amps));
}

struct SCSParams {
    double s = 0.0;      ///< spin quantum number, 2s a nonnegative integer
    double theta = 0.0;  ///< polar angle (radians)
    double phi = 0.0;    ///< azimuthal angle (radians)

    SCSParams(double s_, double theta_, double phi_) : s(s_), theta(theta_), phi(phi_) {
        const double two_s = 2.0 * s;
        if (!(two_s >= 0.0) || std::abs(two_s - std::round(two_s)) > 1e-9)
            throw std::invalid_argument("SCSParams: 2s must be a nonnegative integer");
    }
};

/// Amplitudes of |s, theta, phi> over s_z = -s ... +s (ascending):
/// A(s_z) = sqrt((2s)! / ((s+s_z)!(s-s_z)!)) e^{-i phi s_z}
///          cos(theta/2)^{s+s_z} sin(theta/2)^{s-s_z}.
inline std::vector<cdouble> scs_amplitudes(const SCSParams& p) {
    const int two_s = static_cast<int>(std::llround(2.0 * p.s));
    const double c = std::cos(p.theta / 2.0), s = std::sin(p.theta / 2.0);
    std::vector<cdouble> amps(static_cast<std::size_t>(two_s + 1));
    for (int i = 0; i <= two_s; ++i) {
        // i = s + s_z, so s_z ascends with i; s - s_z = two_s - i.
        const double sz = -p.s + static_cast<double>(i);
        double log_binom = std::lgamma(two_s + 1.0) - std::lgamma(i + 1.0) -
                           std::lgamma(two_s - i + 1.0);
        const double mag = std::sqrt(std::exp(log_binom)) * std::pow(c, i) *
                           std::pow(s, two_s - i);
        amps[static_cast<std::size_t>(i)] = std::polar(1.0, -p.phi * sz) * mag;
    }
    return amps;
}

/// SCS as a walker qudit: site k carries s_z = k * (s / k_max), i.e. the
/// smallest site is s_z = -s and s_z ascends with the site index.
inline WalkerState scs_state(const Lattice& lattice, const SCSParams& p) {
    const int two_s = static_cast<int>(std::llround(2.0 * p.s));
    if (lattice.dim() != two_s + 1)
        throw std::invalid_argument("scs_state: lattice dimension must equal 2s+1");
    return WalkerState(lattice, scs_amplitudes(p));
}

/// Normalized c1|S1> + c2|S2>. Throws if the combination (nearly) cancels.
inline WalkerState scs_superposition(cdouble c1, cdouble c2, const WalkerState& s1,
                                     const WalkerState& s2) {
    if (!(s1.lattice() == s2.lattice()))
        throw std::invalid_argument("scs_superposition: lattice mismatch");
    const std::size_t d = static_cast<std::size_t>(s1.dim());
    std::vector<cdouble> amps(d);
    for (std::size_t i = 0; i < d; ++i) amps[i] = c1 * s1[i] + c2 * s2[i];
    WalkerState out(s1.lattice(), std::move(amps));
    if (out.squared_norm() < 1e-12)
        throw std::invalid_argument("scs_superposition: combination has (near-)zero norm");
    out.normalize();
    return out;
}

/// |QFT_k> = (1/sqrt(d)) sum_{j=1..d} e^{2 pi i j k / d} |j>, with logical
/// index j = 1 at the most negative site, ascending. 1 <= k <= d.
inline WalkerState fourier_state(const Lattice& lattice, int k) {
    const int d = lattice.dim();
    if (k < 1 || k > d) throw std::invalid_argument("fourier_state: k out of range 1..d");
    std::vector<cdouble> amps(static_cast<std::size_t>(d));
    const double r = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 1; j <= d; ++j)
        amps[static_cast<std::size_t>(j - 1)] =
            std::polar(r, 2.0 * pi * static_cast<double>(j) * static_cast<double>(k) /
                              static_cast<double>(d));
    return WalkerState(lattice, std::move(amps));
}

enum class RandomKind { real, complex };

/// Random target: real kind samples each amplitude uniformly in [0,1];
/// complex kind samples real and imaginary parts uniformly in [-0.5, 0.5].
/// Amplitudes are drawn in ascending site order (re before im), then the
/// vector is normalized. Deterministic per seed.
inline WalkerState random_target(RandomKind kind, const Lattice& lattice, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cdouble> amps(static_cast<std::size_t>(lattice.dim()));
    for (auto& a : amps) {
        if (kind == RandomKind::real) {
            a = rng.uniform();
        } else {
            const double re = rng.uniform(-0.5, 0.5);
            const double im = rng.uniform(-0.5, 0.5);
            a = cdouble(re, im);
        }
    }
    WalkerState out(lattice, std::move(amps));
    if (out.squared_norm() < 1e-12)
        throw std::runtime_error("random_target: sampled a (near-)zero vector");
    out.normalize();
    return out;
}

/// Explicit amplitude list in ascending site order, renormalized on load
/// (published tables are rounded and need it).
inline WalkerState explicit_target(const Lattice& lattice, std::vector<cdouble> amplitudes) {
    if (static_cast<int>(amplitudes.size()) != lattice.dim())
        throw std::invalid_argument("explicit_target: amplitude count does not match dimension");
    WalkerState out(lattice, std::move(amplitudes));
    if (out.squared_norm() < 1e-12)
        throw std::invalid_argument("explicit_target: zero amplitude vector");
    out.normalize();
    return out;
}

// ---------------------------------------------------------------------------
// Built-in catalogs (published amplitude tables, ascending site order).
// ---------------------------------------------------------------------------

inline const std::array<std::array<double, 6>, 5>& table2_real_rows() {
    static const std::array<std::array<double, 6>, 5> rows = {{
        {0.51, 0.27, 0.13, 0.10, 0.29, 0.75},
        {0.19, 0.40, 0.04, 0.53, 0.37, 0.62},
        {0.50, 0.74, 0.40, 0.16, 0.10, 0.006},
        {0.50, 0.47, 0.55, 0.31, 0.36, 0.04},
        {0.24, 0.12, 0.72, 0.16, 0.54, 0.30},
    }};
    return rows;
}

inline const std::array<std::array<cdouble, 6>, 5>& table2_complex_rows() {
    static const std::array<std::array<cdouble, 6>, 5> rows = {{
        {{{0.04, 0.35}, {0.34, 0.41}, {0.10, 0.42}, {0.18, -0.26}, {0.11, -0.11}, {-0.47, 0.22}}},
        {{{0.19, -0.33}, {-0.43, 0.30}, {-0.18, -0.02}, {-0.37, 0.42}, {-0.12, -0.10}, {0.23, 0.38}}},
        {{{-0.19, -0.30}, {-0.02, 0.39}, {0.30, -0.15}, {0.25, -0.22}, {-0.13, 0.42}, {0.24, 0.48}}},
        {{{0.06, 0.07}, {0.30, -0.37}, {-0.23, 0.08}, {0.11, -0.13}, {-0.22, 0.57}, {0.07, -0.54}}},
        {{{0.07, 0.14}, {0.48, -0.34}, {-0.41, -0.18}, {-0.41, -0.09}, {-0.10, 0.32}, {0.32, 0.18}}},
    }};
    return rows;
}

struct CatalogEntry {
    std::string name;       ///< short display name
    std::string spec;       ///< target-spec string that regenerates the state
    WalkerState target;     ///< the state itself (d = 6 lattice)
    bool half_probability;  ///< true for targets whose generation probability
                            ///< is budget-matched to 0.5
};

inline WalkerState parse_target_spec(const std::string& spec, const Lattice& lattice);

/// The 32-target suite in published row order: six basis states, four
/// extremal cats, two SCSs and their four superpositions, the six Fourier
/// states, and the ten random rows of the amplitude tables.
inline std::vector<CatalogEntry> table1_catalog() {
    const Lattice lattice(5);
    std::vector<CatalogEntry> out;
    out.reserve(32);
    auto add = [&](std::string name, std::string spec, bool half) {
        WalkerState t = parse_target_spec(spec, lattice);
        out.push_back({std::move(name), std::move(spec), std::move(t), half});
    };

    const std::array<int, 6> sites = {-5, -3, -1, 1, 3, 5};
    for (std::size_t i = 0; i < sites.size(); ++i) {
        std::string amps = "amps:[";
        for (std::size_t j = 0; j < 6; ++j) {
            amps += (j == i) ? "1" : "0";
            amps += (j + 1 < 6) ? "," : "]";
        }
        add("|" + std::to_string(sites[i]) + ">", amps, true);
    }
    add("cat+", "cat:phi=0", true);
    add("cat-", "cat:phi=3.14159265358979312", true);
    add("cat+i", "cat:phi=-1.57079632679489656", true);
    add("cat-i", "cat:phi=1.57079632679489656", true);
    add("S1", "scs:s=2.5,theta=1.57079632679489656,phi=0", false);
    add("S2", "scs:s=2.5,theta=-1.57079632679489656,phi=0", false);
    add("S1+S2", "scscat:sign=+", false);
    add("S1-S2", "scscat:sign=-", false);
    add("S1-iS2", "scscat:sign=-i", false);
    add("S1+iS2", "scscat:sign=+i", false);
    for (int k = 1; k <= 6; ++k)
        add("QFT" + std::to_string(k), "fourier:k=" + std::to_string(k), false);

    auto format_row = [](const std::array<cdouble, 6>& row) {
        std::ostringstream os;
        os << "amps:[";
        for (std::size_t j = 0; j < row.size(); ++j) {
            os << row[j].real();
            if (row[j].imag() != 0.0) {
                if (row[j].imag() >= 0.0) os << "+";
                os << row[j].imag() << "i";
            }
            os << (j + 1 < row.size() ? "," : "]");
        }
        return os.str();
    };
    for (std::size_t i = 0; i < 5; ++i) {
        std::array<cdouble, 6> row;
        for (std::size_t j = 0; j < 6; ++j) row[j] = table2_real_rows()[i][j];
        add("r" + std::to_string(i + 1), format_row(row), false);
    }
    for (std::size_t i = 0; i < 5; ++i)
        add("c" + std::to_string(i + 1), format_row(table2_complex_rows()[i]), false);
    return out;
}

// ---------------------------------------------------------------------------
// Target-spec grammar.
// ---------------------------------------------------------------------------

namespace detail {

/// "0.3", "-1.2e-3", "0.04+0.35i", "-0.1i", "i", "-i".
inline cdouble parse_complex(std::string text) {
    auto fail = [&] { throw std::invalid_argument("bad complex literal: '" + text + "'"); };
    // Trim whitespace.
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.erase(text.begin());
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    if (text.empty()) fail();

    auto parse_real = [&](const std::string& piece, bool allow_bare_sign) -> double {
        if (allow_bare_sign && (piece.empty() || piece == "+")) return 1.0;
        if (allow_bare_sign && piece == "-") return -1.0;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(piece, &used);
        } catch (const std::exception&) {
            fail();
        }
        if (used != piece.size()) fail();
        return v;
    };

    const bool has_i = text.back() == 'i' || text.back() == 'I';
    if (!has_i) return {parse_real(text, false), 0.0};
    std::string body = text.substr(0, text.size() - 1);
    // Split "a+bi" / "a-bi" at the sign that starts the imaginary part
    // (a sign not at position 0 and not part of an exponent).
    for (std::size_t pos = body.size(); pos-- > 1;) {
        const char ch = body[pos];
        if ((ch == '+' || ch == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
            return {parse_real(body.substr(0, pos), false),
                    parse_real(body.substr(pos), true)};
        }
    }
    return {0.0, parse_real(body, true)};
}

/// Split "k1=v1,k2=v2" into ordered pairs.
inline std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(start, comma - start);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("bad parameter '" + item + "' (expected key=value)");
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        start = comma + 1;
    }
    return out;
}

inline double require_number(const std::vector<std::pair<std::string, std::string>>& kv,
                             const std::string& key) {
    for (const auto& [k, v] : kv)
        if (k == key) {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (used != v.size())
                throw std::invalid_argument("bad number for '" + key + "': '" + v + "'");
            return x;
        }
    throw std::invalid_argument("missing parameter '" + key + "'");
}

inline std::string require_string(const std::vector<std::pair<std::string, std::string>>& kv,
                                  const std::string& key) {
    for (const auto& [k, v] : kv)
        if (k == key) return v;
    throw std::invalid_argument("missing parameter '" + key + "'");
}

}  // namespace detail

/// Grammar: `cat:phi=<rad>` | `scs:s=<half-int>,theta=<rad>,phi=<rad>` |
/// `scscat:sign=+|-|+i|-i` | `fourier:k=<int>` |
/// `random:kind=real|complex,seed=<int>` | `amps:[re(+im i),...]`.
/// Malformed specs and dimension mismatches throw std::invalid_argument.
inline WalkerState parse_target_spec(const std::string& spec, const Lattice& lattice) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("target spec needs the form kind:params, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);

    if (kind == "cat") {
        return extremal_cat(lattice, detail::require_number(detail::parse_kv(rest), "phi"));
    }
    if (kind == "scs") {
        const auto kv = detail::parse_kv(rest);
        return scs_state(lattice, SCSParams(detail::require_number(kv, "s"),
                                            detail::require_number(kv, "theta"),
                                            detail::require_number(kv, "phi")));
    }
    if (kind == "scscat") {
        const std::string sign = detail::require_string(detail::parse_kv(rest), "sign");
        cdouble c2;
        if (sign == "+") c2 = 1.0;
        else if (sign == "-") c2 = -1.0;
        else if (sign == "+i") c2 = cdouble(0.0, 1.0);
        else if (sign == "-i") c2 = cdouble(0.0, -1.0);
        else throw std::invalid_argument("scscat sign must be one of +, -, +i, -i");
        const double s = (lattice.dim() - 1) / 2.0;
        const WalkerState s1 = scs_state(lattice, SCSParams(s, pi / 2.0, 0.0));
        const WalkerState s2 = scs_state(lattice, SCSParams(s, -pi / 2.0, 0.0));
        return scs_superposition(1.0, c2, s1, s2);
    }
    if (kind == "fourier") {
        const double k = detail::require_number(detail::parse_kv(rest), "k");
        if (std::abs(k - std::round(k)) > 1e-12)
            throw std::invalid_argument("fourier index k must be an integer");
        return fourier_state(lattice, static_cast<int>(std::llround(k)));
    }
    if (kind == "random") {
        const auto kv = detail::parse_kv(rest);
        const std::string k = detail::require_string(kv, "kind");
        RandomKind rk;
        if (k == "real") rk = RandomKind::real;
        else if (k == "complex") rk = RandomKind::complex;
        else throw std::invalid_argument("random kind must be real or complex");
        const double seed = detail::require_number(kv, "seed");
        if (seed < 0 || std::abs(seed - std::round(seed)) > 1e-12)
            throw std::invalid_argument("random seed must be a nonnegative integer");
        return random_target(rk, lattice, static_cast<std::uint64_t>(std::llround(seed)));
    }
    if (kind == "amps") {
        if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']')
            throw std::invalid_argument("amps spec must look like amps:[a,b,...]");
        const std::string body = rest.substr(1, rest.size() - 2);
        std::vector<cdouble> amps;
        std::size_t start = 0;
        while (start <= body.size()) {
            std::size_t comma = body.find(',', start);
            if (comma == std::string::npos) comma = body.size();
            amps.push_back(detail::parse_complex(body.substr(start, comma - start)));
            start = comma + 1;
        }
        return explicit_target(lattice, std::move(amps));
    }
    throw std::invalid_argument("unknown target kind '" + kind + "'");
}

}  // namespace qwse
