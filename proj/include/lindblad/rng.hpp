// rng.hpp — 64-bit linear congruential generator used for every seeded
// fixture, so identical scenarios can be regenerated anywhere:
//   state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
// Uniform doubles take the top 53 bits of the state.

#pragma once

#include "lindblad/types.hpp"

#include <cstdint>

namespace lindblad {

class Lcg64 {
public:
    explicit Lcg64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // rejection sampling from the square; at most a few draws
    Complex unit_disc() {
        for (;;) {
            const double re = uniform(-1.0, 1.0);
            const double im = uniform(-1.0, 1.0);
            if (re * re + im * im <= 1.0) return {re, im};
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace lindblad
