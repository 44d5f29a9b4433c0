#pragma once

#include <cstdint>

namespace combmap {

// splitmix64: tiny deterministic generator, identical across platforms
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    int uniform_int(int a, int b) { // inclusive bounds
        return a + static_cast<int>(next() % static_cast<std::uint64_t>(b - a + 1));
    }
};

} // namespace combmap
