// Measurement layer: Gram-Schmidt bases, projective probabilities, multinomial
// count simulation, and the Poisson-resampled fidelity estimator.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <qwse/qwse.hpp>

using namespace qwse;

namespace {
const Lattice lat5(5);

WalkerState basis_ket(int site) {
    std::vector<cdouble> v(static_cast<std::size_t>(lat5.dim()));
    v[static_cast<std::size_t>(lat5.site_index(site))] = 1.0;
    return WalkerState(lat5, std::move(v));
}
}  // namespace

TEST_CASE("gram_schmidt_basis for a single-site target permutes the site basis") {
    const auto basis = gram_schmidt_basis(basis_ket(5));
    REQUIRE(basis.size() == 6);
    CHECK(std::abs(fidelity(basis[0], basis_ket(5)) - 1.0) < 1e-14);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
            REQUIRE(std::abs(inner(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("gram_schmidt_basis for the cat target") {
    // Hand result: {cat+, cat-, |-3>, |-1>, |1>, |3>}; |+5> reduces to zero and
    // is skipped, so the basis still has exactly d members.
    const WalkerState cat = extremal_cat(lat5, 0.0);
    const auto basis = gram_schmidt_basis(cat);
    REQUIRE(basis.size() == 6);
    CHECK(std::abs(fidelity(basis[0], cat) - 1.0) < 1e-14);
    CHECK(std::abs(fidelity(basis[1], extremal_cat(lat5, pi)) - 1.0) < 1e-12);
    CHECK(std::abs(fidelity(basis[2], basis_ket(-3)) - 1.0) < 1e-12);
    CHECK(std::abs(fidelity(basis[3], basis_ket(-1)) - 1.0) < 1e-12);
    CHECK(std::abs(fidelity(basis[4], basis_ket(1)) - 1.0) < 1e-12);
    CHECK(std::abs(fidelity(basis[5], basis_ket(3)) - 1.0) < 1e-12);
}

TEST_CASE("basis_probabilities appends a sink bucket") {
    const WalkerState cat = extremal_cat(lat5, 0.0);
    const auto basis = gram_schmidt_basis(cat);
    const auto probs = basis_probabilities(cat, basis);
    REQUIRE(probs.size() == basis.size() + 1);
    CHECK(probs[0] == Catch::Approx(1.0).margin(1e-12));
    double total = 0.0;
    for (double p : probs) {
        CHECK(p >= 0.0);
        total += p;
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-12));

    // Partial bases leave real mass in the sink.
    const std::vector<WalkerState> partial{basis[1]};
    const auto p2 = basis_probabilities(cat, partial);
    REQUIRE(p2.size() == 2);
    CHECK(p2[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(p2[1] == Catch::Approx(1.0).margin(1e-12));

    // Non-orthonormal sets are rejected.
    const std::vector<WalkerState> bad{basis[0], basis[0]};
    CHECK_THROWS_AS(basis_probabilities(cat, bad), std::invalid_argument);
}

TEST_CASE("simulate_counts is deterministic and conserves shots") {
    const WalkerState cat = extremal_cat(lat5, 0.0);
    const auto basis = gram_schmidt_basis(scs_state(lat5, SCSParams(2.5, pi / 2, 0.0)));
    const auto c1 = simulate_counts(cat, basis, 10000, 77);
    const auto c2 = simulate_counts(cat, basis, 10000, 77);
    const auto c3 = simulate_counts(cat, basis, 10000, 78);
    REQUIRE(c1 == c2);
    CHECK(c1 != c3);
    std::int64_t total = 0;
    for (auto k : c1) total += k;
    CHECK(total == 10000);
    CHECK_THROWS_AS(simulate_counts(cat, basis, -1, 77), std::invalid_argument);
}

TEST_CASE("fidelity estimator recovers the bucket frequency") {
    const std::vector<std::int64_t> counts{900, 50, 50};
    const auto est = estimate_fidelity_mc(counts, 0, 200, 4242);
    CHECK(est.f_hat == Catch::Approx(0.9).margin(1e-15));
    CHECK(est.sigma > 0.0);
    CHECK(est.sigma < 0.05);
    CHECK(est.resamples == 200);
    const auto est2 = estimate_fidelity_mc(counts, 0, 200, 4242);
    CHECK(est.sigma == est2.sigma);  // bitwise reproducible

    CHECK_THROWS_AS(estimate_fidelity_mc(counts, 5, 200, 1), std::out_of_range);
    CHECK_THROWS_AS(estimate_fidelity_mc(counts, 0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_fidelity_mc({-1, 2}, 0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_fidelity_mc({0, 0}, 0, 10, 1), std::invalid_argument);
}

TEST_CASE("counting pipeline lands near the true fidelity") {
    // One smoke trial of the full pipeline (the acceptance gate runs 500).
    const WalkerState cat = extremal_cat(lat5, 0.0);
    const WalkerState s1 = scs_state(lat5, SCSParams(2.5, pi / 2, 0.0));
    const double f_true = std::norm(inner(s1, cat));
    CHECK(f_true == Catch::Approx(1.0 / 16.0).margin(1e-12));
    const auto basis = gram_schmidt_basis(s1);
    const auto counts = simulate_counts(cat, basis, 10000, 20260814);
    const auto est = estimate_fidelity_mc(counts, 0, 200, 20260815);
    CHECK(std::abs(est.f_hat - f_true) < 5.0 * est.sigma);
}
