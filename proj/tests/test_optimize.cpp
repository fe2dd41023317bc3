// Engineering optimizer: problem validation, the objective, finite-difference
// gradients, and the multistart search itself.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <qwse/qwse.hpp>

using namespace qwse;

namespace {

const Lattice lat5(5);

std::vector<CoinParams> identity_coins(int n) {
    return std::vector<CoinParams>(static_cast<std::size_t>(n), CoinParams(0.0, 0.0, 0.0));
}

/// Mirror image of a coin under site reflection k -> -k (basis swap).
CoinParams mirror_coin(const CoinParams& c) {
    return CoinParams(c.theta, -c.xi, pi - c.zeta);
}

WalkerState reversed(const WalkerState& s) {
    std::vector<cdouble> v(s.amplitudes().rbegin(), s.amplitudes().rend());
    return WalkerState(s.lattice(), std::move(v));
}

}  // namespace

TEST_CASE("problem validation") {
    const WalkerState cat = extremal_cat(lat5, 0.0);
    CHECK_NOTHROW(EngineeringProblem(5, cat));
    CHECK_THROWS_AS(EngineeringProblem(0, cat), std::invalid_argument);
    // Walk length and target lattice must agree.
    CHECK_THROWS_AS(EngineeringProblem(4, cat), infeasible_target_error);
    // OAM step of the initial state must match the target's.
    const WalkerState stepped = extremal_cat(Lattice(5, 2), 0.0);
    CHECK_THROWS_AS(EngineeringProblem(5, WalkerCoinState::initial(1), CoinKet::plus(), stepped),
                    infeasible_target_error);
}

TEST_CASE("objective on hand-solved coin sequences") {
    // Identity coins split |0>|+> into a marching pair: the extremal cat at
    // exactly half post-selection probability.
    const EngineeringProblem cat_problem(5, extremal_cat(lat5, 0.0));
    const auto [f_cat, p_cat] = objective(cat_problem, identity_coins(5));
    CHECK(f_cat == Catch::Approx(1.0).margin(1e-12));
    CHECK(p_cat == Catch::Approx(0.5).margin(1e-12));

    // First coin steers |+> to |up>, the rest are identities: walker marches
    // to +5 and the final projection pays the 1/2 coin overlap.
    std::vector<CoinParams> steer = identity_coins(5);
    steer[0] = CoinParams(pi / 4, 0.0, pi);
    const EngineeringProblem top_problem(5, parse_target_spec("amps:[0,0,0,0,0,1]", lat5));
    const auto [f_top, p_top] = objective(top_problem, steer);
    CHECK(f_top == Catch::Approx(1.0).margin(1e-12));
    CHECK(p_top == Catch::Approx(0.5).margin(1e-12));

    CHECK_THROWS_AS(objective(cat_problem, identity_coins(4)), std::invalid_argument);
}

TEST_CASE("objective stays in range and ignores the target's global phase") {
    Rng rng(2718);
    const WalkerState target = random_target(RandomKind::complex, lat5, 3);
    std::vector<cdouble> rotated = target.amplitudes();
    for (auto& a : rotated) a *= std::polar(1.0, 0.77);
    const EngineeringProblem problem(5, target);
    const EngineeringProblem problem2(5, WalkerState(lat5, rotated));
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<CoinParams> coins;
        for (int t = 0; t < 5; ++t) coins.push_back(random_coin(rng));
        const auto [f, p] = objective(problem, coins);
        REQUIRE(f >= 0.0);
        REQUIRE(f <= 1.0 + 1e-12);
        REQUIRE(p >= 0.0);
        REQUIRE(p <= 1.0 + 1e-12);
        const auto [f2, p2] = objective(problem2, coins);
        REQUIRE(f2 == Catch::Approx(f).margin(1e-12));
        REQUIRE(p2 == Catch::Approx(p).margin(1e-15));
    }
}

TEST_CASE("walk dynamics commute with the site mirror") {
    // Reflecting every coin and the (palindromic) target leaves the objective
    // unchanged; |+> projection and |0>|+> preparation are mirror-invariant.
    Rng rng(161803);
    const WalkerState target = random_target(RandomKind::complex, lat5, 5);
    const EngineeringProblem problem(5, target);
    const EngineeringProblem mirrored_problem(5, reversed(target));
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<CoinParams> coins, mirrored;
        for (int t = 0; t < 5; ++t) {
            coins.push_back(random_coin(rng));
            mirrored.push_back(mirror_coin(coins.back()));
        }
        const auto [f, p] = objective(problem, coins);
        const auto [fm, pm] = objective(mirrored_problem, mirrored);
        REQUIRE(fm == Catch::Approx(f).margin(1e-12));
        REQUIRE(pm == Catch::Approx(p).margin(1e-12));
    }
}

TEST_CASE("gradient matches a high-order stencil") {
    Rng rng(99);
    const EngineeringProblem problem(5, extremal_cat(lat5, 0.0));
    std::vector<CoinParams> coins;
    for (int t = 0; t < 5; ++t) coins.push_back(random_coin(rng));
    const auto grad = finite_difference_gradient(problem, coins, 1e-6);
    REQUIRE(grad.size() == 15);

    auto fidelity_at = [&](const std::vector<double>& x) {
        std::vector<CoinParams> c;
        for (std::size_t t = 0; t < 5; ++t)
            c.emplace_back(x[3 * t], x[3 * t + 1], x[3 * t + 2]);
        return objective(problem, c).first;
    };
    std::vector<double> x;
    for (const auto& c : coins) {
        x.push_back(c.theta);
        x.push_back(c.xi);
        x.push_back(c.zeta);
    }
    const double h = 1e-4;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto shifted = [&](double d) {
            std::vector<double> y = x;
            y[i] += d;
            return fidelity_at(y);
        };
        const double stencil =
            (shifted(-2 * h) - 8 * shifted(-h) + 8 * shifted(h) - shifted(2 * h)) / (12 * h);
        REQUIRE(std::abs(grad[i] - stencil) < 1e-6);
    }
    CHECK_THROWS_AS(finite_difference_gradient(problem, coins, 0.0), std::invalid_argument);
}

TEST_CASE("gradient respects the mirror symmetry at the identity point") {
    // For a palindromic target the identity-coin point is its own mirror
    // image, so every xi and zeta derivative must vanish.
    const EngineeringProblem problem(5, extremal_cat(lat5, 0.0));
    const auto grad = finite_difference_gradient(problem, identity_coins(5), 1e-6);
    for (std::size_t t = 0; t < 5; ++t) {
        CHECK(std::abs(grad[3 * t + 1]) < 1e-8);
        CHECK(std::abs(grad[3 * t + 2]) < 1e-8);
    }
}

TEST_CASE("optimize engineers the cat state deterministically") {
    const EngineeringProblem problem(5, extremal_cat(lat5, 0.0));
    OptimizerConfig config;
    config.multistarts = 6;
    config.seed = 20260814;
    config.refine_probability = true;

    const EngineeringResult r1 = optimize(problem, config);
    CHECK(r1.fidelity >= 0.999);
    CHECK(std::abs(r1.probability - 0.5) <= 0.02);
    CHECK_FALSE(r1.below_threshold);
    CHECK(r1.seed == config.seed);
    REQUIRE(r1.coins.size() == 5);
    for (const auto& c : r1.coins) {
        CHECK(c.theta >= 0.0);
        CHECK(c.theta <= pi / 2 + 1e-12);
    }
    // Gradient is stationary at the reported optimum.
    double gnorm = 0.0;
    for (double g : finite_difference_gradient(problem, r1.coins, 1e-6)) gnorm += g * g;
    CHECK(std::sqrt(gnorm) < 1e-4);

    // Bitwise reproducibility.
    const EngineeringResult r2 = optimize(problem, config);
    REQUIRE(r2.coins.size() == r1.coins.size());
    for (std::size_t t = 0; t < r1.coins.size(); ++t) {
        REQUIRE(r2.coins[t].theta == r1.coins[t].theta);
        REQUIRE(r2.coins[t].xi == r1.coins[t].xi);
        REQUIRE(r2.coins[t].zeta == r1.coins[t].zeta);
    }
    REQUIRE(r2.fidelity == r1.fidelity);
    REQUIRE(r2.probability == r1.probability);
    REQUIRE(r2.best_start_index == r1.best_start_index);

    // Re-running the core on the reported coins reproduces the numbers.
    const auto [f, p] = objective(problem, r1.coins);
    CHECK(std::abs(f - r1.fidelity) < 1e-10);
    CHECK(std::abs(p - r1.probability) < 1e-10);
}

TEST_CASE("extremal targets cap the probability at one half") {
    const EngineeringProblem problem(5, parse_target_spec("amps:[0,0,0,0,0,1]", lat5));
    OptimizerConfig config;
    config.multistarts = 6;
    config.seed = 7;
    config.refine_probability = true;
    const EngineeringResult r = optimize(problem, config);
    CHECK(r.fidelity >= 0.999);
    CHECK(r.probability <= 0.5 + 1e-9);
    CHECK(std::abs(r.probability - 0.5) <= 0.02);
}

TEST_CASE("optimizer configuration validation") {
    const EngineeringProblem problem(5, extremal_cat(lat5, 0.0));
    OptimizerConfig config;
    config.multistarts = 0;
    CHECK_THROWS_AS(optimize(problem, config), std::invalid_argument);
}
