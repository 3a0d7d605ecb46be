#pragma once

#include <cstdint>

namespace corrcipher {

// Deterministic 64-bit generator (splitmix64). Used everywhere instead of
// <random> engines + distributions so that sampled sequences, bin maps and
// keys are bit-identical across standard libraries and platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, m). Rejection sampling, exact for any m >= 1.
    std::uint64_t next_below(std::uint64_t m) {
        if (m <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % m;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % m;
    }

  private:
    std::uint64_t state_;
};

/// Stateless mix of two 64-bit values, for deriving independent seed streams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace corrcipher
