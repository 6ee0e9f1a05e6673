// Seeded RNG with an explicit bit mapping for doubles so that streams are
// reproducible across platforms and standard library versions.
#pragma once

#include <cstdint>
#include <random>

namespace mvp {

class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    // Uniform in [0, 1), 53 bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace mvp
