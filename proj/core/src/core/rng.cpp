#include "pearl/core/rng.hpp"

#include <cmath>

namespace pearl {

double Rng::uniform(double lo, double hi) {
    if (!(hi > lo)) return lo;
    double v = lo + (hi - lo) * uniform();
    // lo + (hi-lo)*u can round up to hi.
    if (v >= hi) v = std::nextafter(hi, lo);
    return v;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace pearl
