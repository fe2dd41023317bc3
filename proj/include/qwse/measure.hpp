#pragma once

// Measurement emulation for the engineered qudit: an orthonormal measurement
// basis whose first element is the target state (so the target-bucket
// frequency estimates the fidelity directly), multinomial photon counting,
// and a Poisson-resampling error bar for the fidelity estimate.

#include <cstdint>
#include <vector>

#include "common.hpp"
#include "rng.hpp"
#include "state.hpp"

namespace qwse {

/// Orthonormal basis with basis[0] == target (normalized). The remaining
/// vectors come from Gram-Schmidt over the computational site kets taken in
/// ascending site order; kets that lose (almost) all their norm to the
/// previous vectors are skipped.
inline std::vector<WalkerState> gram_schmidt_basis(const WalkerState& target) {
    const Lattice lattice = target.lattice();
    const std::size_t d = static_cast<std::size_t>(lattice.dim());
    std::vector<WalkerState> basis;
    basis.reserve(d);

    WalkerState first = target;
    first.normalize();
    basis.push_back(std::move(first));

    for (std::size_t j = 0; j < d && basis.size() < d; ++j) {
        std::vector<cdouble> v(d);
        v[j] = 1.0;
        WalkerState cand(lattice, std::move(v));
        for (const auto& b : basis) {
            const cdouble c = inner(b, cand);
            std::vector<cdouble> next(d);
            for (std::size_t i = 0; i < d; ++i) next[i] = cand[i] - c * b[i];
            cand = WalkerState(lattice, std::move(next));
        }
        if (cand.squared_norm() < 1e-10) continue;
        cand.normalize();
        basis.push_back(std::move(cand));
    }
    if (basis.size() != d)
        throw std::runtime_error("gram_schmidt_basis: failed to complete the basis");
    return basis;
}

/// Probabilities |<b_i|state>|^2 followed by one sink bucket that absorbs
/// whatever the listed vectors miss (never negative). Throws if the supplied
/// vectors are not orthonormal to within 1e-10.
inline std::vector<double> basis_probabilities(const WalkerState& state,
                                               const std::vector<WalkerState>& basis) {
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(std::abs(inner(basis[i], basis[j])) - want) > 1e-10)
                throw std::invalid_argument("basis_probabilities: basis is not orthonormal");
        }
    std::vector<double> p;
    p.reserve(basis.size() + 1);
    double total = 0.0;
    for (const auto& b : basis) {
        const double q = std::norm(inner(b, state));
        p.push_back(q);
        total += q;
    }
    p.push_back(std::max(0.0, state.squared_norm() - total));
    return p;
}

/// Multinomial counting experiment: `shots` photons distributed over the
/// basis buckets plus the trailing sink bucket.
inline std::vector<std::int64_t> simulate_counts(const WalkerState& state,
                                                 const std::vector<WalkerState>& basis,
                                                 std::int64_t shots, std::uint64_t seed) {
    if (shots < 0) throw std::invalid_argument("simulate_counts: negative shot count");
    Rng rng(seed);
    const auto raw =
        rng.multinomial(basis_probabilities(state, basis), static_cast<std::uint64_t>(shots));
    return std::vector<std::int64_t>(raw.begin(), raw.end());
}

struct FidelityEstimate {
    double f_hat = 0.0;   ///< target-bucket frequency
    double sigma = 0.0;   ///< Poisson-resampling standard deviation
    int resamples = 0;
};

/// Estimate the fidelity as counts[target_index] / total and attach a
/// standard deviation obtained by resampling every bucket as an independent
/// Poisson variable (the standard error model for photon counting).
inline FidelityEstimate estimate_fidelity_mc(const std::vector<std::int64_t>& counts,
                                             std::size_t target_index, int resamples,
                                             std::uint64_t seed) {
    if (target_index >= counts.size())
        throw std::out_of_range("estimate_fidelity_mc: target index out of range");
    if (resamples < 2) throw std::invalid_argument("estimate_fidelity_mc: need >= 2 resamples");
    std::int64_t total = 0;
    for (auto c : counts) {
        if (c < 0) throw std::invalid_argument("estimate_fidelity_mc: negative count");
        total += c;
    }
    if (total == 0) throw std::invalid_argument("estimate_fidelity_mc: empty counts");

    FidelityEstimate est;
    est.f_hat = static_cast<double>(counts[target_index]) / static_cast<double>(total);
    est.resamples = resamples;

    Rng rng(seed);
    std::vector<double> fs(static_cast<std::size_t>(resamples));
    for (auto& f : fs) {
        double rtotal = 0.0, rtarget = 0.0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const double c = static_cast<double>(rng.poisson(static_cast<double>(counts[i])));
            rtotal += c;
            if (i == target_index) rtarget = c;
        }
        f = (rtotal > 0.0) ? rtarget / rtotal : est.f_hat;
    }
    double mean = 0.0;
    for (double f : fs) mean += f;
    mean /= static_cast<double>(resamples);
    double var = 0.0;
    for (double f : fs) var += (f - mean) * (f - mean);
    var /= static_cast<double>(resamples - 1);
    est.sigma = std::sqrt(var);
    return est;
}

}  // namespace qwse
