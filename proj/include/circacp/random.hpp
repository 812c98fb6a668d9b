#pragma once

#include <cstdint>
#include <random>

namespace circacp {

/// Seedable generator whose output is fully specified, so fixtures can be
/// regenerated bit-for-bit on any platform or in another language:
///
///   engine   std::mt19937_64 seeded with the 64-bit seed (sequence fixed by the C++ standard)
///   uniform  ((word >> 11) + 0.5) * 2^-53, in the open interval (0, 1)
///   normal   Box-Muller from two consecutive uniforms u1, u2: sqrt(-2 ln u1) cos(2 pi u2);
///            the sine branch is discarded
///   gamma    Marsaglia-Tsang squeeze (2000) for shape >= 1; shape < 1 draws
///            Gamma(shape + 1) and multiplies by u^(1/shape), u drawn after it
///
/// The std:: distributions are avoided because their algorithms are unspecified.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();
    double normal(double mean = 0.0, double sd = 1.0);
    double gamma(double shape, double scale);

private:
    std::mt19937_64 engine_;
};

}  // namespace circacp
