#pragma once

#include <cstdint>

namespace gridcover {

/*
SplitMix64 (Steele/Lea/Flood; public-domain reference by Vigna).

State advances by the 64-bit golden-ratio increment and each output is a
full avalanche mix of the counter, so the generator is effectively
counter-based: output i of the stream seeded with s is

    mix(s + (i+1) * 0x9E3779B97F4A7C15)

which makes random access (`at`) and per-trial substreams (seed + t) cheap
and platform-stable. All derived draws (bounded integers, unit doubles)
are implemented here rather than through <random> distributions, whose
algorithms are implementation-defined.
*/
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kGamma;
        return mix(state_);
    }

    /// i-th output (0-based) of the stream seeded with `seed`.
    static std::uint64_t at(std::uint64_t seed, std::uint64_t i) {
        return mix(seed + (i + 1) * kGamma);
    }

    /// Unbiased uniform draw in [0, bound) via Lemire's multiply-shift
    /// with rejection. bound must be >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    static double unit_at(std::uint64_t seed, std::uint64_t i) {
        return static_cast<double>(at(seed, i) >> 11) * 0x1.0p-53;
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace gridcover
