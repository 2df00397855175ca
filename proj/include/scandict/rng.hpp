#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace scandict {

// Seedable generator with a fully specified algorithm (64-bit Mersenne Twister,
// std::mt19937_64) and hand-written conversions, so draws are identical across
// platforms and standard libraries. std::*_distribution is deliberately not used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer on [0, n), n > 0; rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n);

    // Index drawn from an unnormalized non-negative weight vector.
    std::size_t categorical(std::span<const double> weights);

    // Per-replica seed: seed + index.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) { return seed + index; }

private:
    std::mt19937_64 engine_;
};

} // namespace scandict
