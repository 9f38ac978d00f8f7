#pragma once

#include <cstdint>
#include <random>

namespace pearl {

/// Portable random stream. Wraps mt19937_64 and derives floating-point and
/// bounded-integer draws itself so sequences do not depend on the standard
/// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    void seed(std::uint64_t s) { engine_.seed(s); }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi). Returns lo when the interval is empty.
    double uniform(double lo, double hi);

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64-style combination used to derive independent sub-streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace pearl
