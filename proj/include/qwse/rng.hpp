#pragma once

// Seedable, portable randomness. The engine is std::mt19937_64 (bit-exact on
// every platform); the distributions are hand-rolled because the standard
// library's are implementation-defined and would break the reproducibility
// contract across toolchains. Substreams are derived with a splitmix64 hash
// so concurrent consumers (multistarts, batch rows) are schedule-independent.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qwse {

/// splitmix64 finalizer; good avalanche, used only for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for substream `k` of master seed `master`. Distinct substreams are
/// decorrelated by the golden-ratio stride plus the splitmix64 avalanche.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t k) {
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * (k + 1));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Poisson deviate. Product method below mean 12, ratio rejection above
    /// (the classic poidev construction); both consume only uniform() draws.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        if (mean < 12.0) {
            const double limit = std::exp(-mean);
            std::uint64_t k = 0;
            double product = uniform();
            while (product > limit) {
                ++k;
                product *= uniform();
            }
            return k;
        }
        const double sq = std::sqrt(2.0 * mean);
        const double log_mean = std::log(mean);
        const double g = mean * log_mean - std::lgamma(mean + 1.0);
        while (true) {
            double y, em;
            do {
                y = std::tan(pi_ * uniform());
                em = sq * y + mean;
            } while (em < 0.0);
            em = std::floor(em);
            const double t = 0.9 * (1.0 + y * y) * std::exp(em * log_mean - std::lgamma(em + 1.0) - g);
            if (uniform() <= t) return static_cast<std::uint64_t>(em);
        }
    }

    /// Multinomial draw: `shots` independent categorical samples over
    /// `probabilities` (which must sum to <= 1 + tiny slack; any remainder
    /// feeds the final bucket, so pass an explicit sink when needed).
    std::vector<std::uint64_t> multinomial(const std::vector<double>& probabilities,
                                           std::uint64_t shots) {
        std::vector<double> cumulative(probabilities.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < probabilities.size(); ++i) {
            if (probabilities[i] < -1e-12)
                throw std::invalid_argument("multinomial: negative probability");
            acc += probabilities[i];
            cumulative[i] = acc;
        }
        if (acc > 1.0 + 1e-9)
            throw std::invalid_argument("multinomial: probabilities sum above 1");
        if (!cumulative.empty()) cumulative.back() = std::max(cumulative.back(), 1.0);
        std::vector<std::uint64_t> counts(probabilities.size(), 0);
        for (std::uint64_t s = 0; s < shots; ++s) {
            const double u = uniform();
            std::size_t bucket = 0;
            while (bucket + 1 < cumulative.size() && u >= cumulative[bucket]) ++bucket;
            ++counts[bucket];
        }
        return counts;
    }

  private:
    static constexpr double pi_ = 3.14159265358979323846;
    std::mt19937_64 engine_;
};

}  // namespace qwse
