#pragma once

#include <cstdint>
#include <random>

namespace blocksplit {

/// Deterministic random stream used by every simulator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded draws do not go through std::uniform_int_distribution
/// (its algorithm is implementation-defined); they use rejection sampling on
/// the raw 64-bit output so that results are identical on every platform.
///
/// Run k of a multi-run experiment uses seed `base_seed + k`.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng for_run(std::uint64_t base_seed, std::uint64_t run_index) {
        return Rng(base_seed + run_index);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [1, n]. n must be positive.
    std::uint64_t uniform_1_to(std::uint64_t n) {
        // Largest multiple of n that fits; values at or above it are redrawn.
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x > limit);
        return x % n + 1;
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace blocksplit
