#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dncsc {

/// Combines two 64-bit values into a well-mixed derived seed (splitmix64
/// finalizer). Used to split one master seed into independent per-stage and
/// per-subset streams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

/// Seeded random source built on std::mt19937_64. The engine's output
/// sequence is fixed by the standard; the distribution transforms below are
/// implemented by hand so that results are bit-identical across standard
/// libraries (std::*_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Unbiased integer in [0, bound). bound must be >= 1.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = eng_();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform_double() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal deviate (Box-Muller, pairs cached).
    double normal();

    /// m distinct indices drawn uniformly from [0, n), returned ascending.
    std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t m);

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace dncsc
