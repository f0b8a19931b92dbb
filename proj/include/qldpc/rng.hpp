#pragma once

#include <bit>
#include <cstdint>

namespace qldpc {

// 64-bit finalizer used by SplitMix64 (Steele/Lea/Vigna, public domain).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// SplitMix64 stream. Pure 64-bit integer arithmetic, so sequences are
// identical on every platform; independent streams are derived by hashing a
// master seed together with stream labels (see derive_seed).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return mix64(state_ += 0x9e3779b97f4a7c15ULL); }

    // Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound), bound > 0, unbiased via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = -bound % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

  private:
    std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t h = mix64(seed ^ 0x2545f4914f6cdd1dULL);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    return h;
}

// Stable label for a double-valued stream key (e.g. a physical error rate).
inline std::uint64_t double_bits(double x) { return std::bit_cast<std::uint64_t>(x); }

} // namespace qldpc
