#pragma once

#include <cstdint>
#include <random>

namespace dyncol {

// Deterministic random source. The engine's probabilistic guarantees assume the
// palette index is drawn exactly uniformly, so uniform_below uses rejection
// sampling on the raw 64-bit output instead of a (biased) modulo reduction.
// mt19937_64 output is fully specified by the standard, which keeps runs
// reproducible across platforms; std::uniform_int_distribution is not, which is
// why it is not used here.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_raw() { return eng_(); }

    // Uniform draw from [0, k). k must be positive.
    std::uint64_t uniform_below(std::uint64_t k) {
        // 2^64 mod k; raw values below this would overweight the low residues.
        const std::uint64_t cutoff = (0 - k) % k;
        for (;;) {
            const std::uint64_t r = eng_();
            if (r >= cutoff) return r % k;
        }
    }

    // Uniform draw from [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace dyncol
