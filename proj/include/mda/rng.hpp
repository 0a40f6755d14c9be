#pragma once

#include <cstdint>
#include <vector>

namespace mda {

// Fixed 64-bit linear congruential generator (Knuth MMIX constants). Used
// for every sampling decision so selections replay identically across runs
// and platforms for a given seed.
class Lcg64 {
public:
    explicit Lcg64(std::uint64_t seed) : state_(seed) { next(); }

    std::uint64_t next() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    // Uniform in [0, bound) by rejection on the top 53 bits (no modulo bias).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = (~0ULL / bound) * bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Deterministic partial Fisher-Yates: the first k slots of a shuffled
// 0..n-1 index vector.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    Lcg64& rng);

}  // namespace mda
