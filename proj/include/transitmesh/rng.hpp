#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace transitmesh {
namespace detail {

// splitmix64 finalizer; spreads correlated seeds (e.g. base ^ index) apart.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Thin deterministic sampling layer over the standard engine. The stdlib
// distribution classes are implementation-defined, so byte-exact outputs
// for a fixed seed are produced by sampling manually.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound), bound >= 1. Fixed-point multiply on
    // the high 32 bits keeps the mapping platform-stable.
    std::uint32_t below(std::uint32_t bound) {
        const std::uint64_t hi = engine_() >> 32;
        return static_cast<std::uint32_t>((hi * bound) >> 32);
    }

    std::size_t weighted(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double x = uniform01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            x -= weights[i];
            if (x < 0.0) return i;
        }
        return weights.size() - 1;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace detail
}  // namespace transitmesh
