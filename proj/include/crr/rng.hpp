// SPDX-License-Identifier: Apache-2.0

#ifndef CRR_RNG_HPP
#define CRR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "crr/system.hpp"

namespace crr {

// Deterministic standard-normal stream: mt19937_64 -> 53-bit uniforms ->
// Box-Muller. std::normal_distribution is implementation-defined, so it is
// not used anywhere in this project; this mapping is stable across compilers
// and is part of the seeded-reproducibility contract.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1], u2 in [0,1)
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586;
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

    // Zero-mean unit-variance circularly symmetric complex Gaussian.
    cplx next_cscg() {
        const double x = next();
        const double y = next();
        return cplx(x, y) / std::sqrt(2.0);
    }

    // Uniform in [0, 1).
    double next_uniform() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }

private:
    std::mt19937_64 gen_;
    double spare_ = 0;
    bool have_spare_ = false;
};

}  // namespace crr

#endif
