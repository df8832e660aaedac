#pragma once

#include <cstdint>
#include <vector>

#include "gptr/types.hpp"

namespace gptr {

/// Element `index` of the van der Corput sequence in the given base.
double halton(std::uint64_t index, std::uint32_t base);

/// Inverse standard-normal CDF (Acklam's rational approximation, refined by
/// one Halley step; |error| < 1e-15 on (0,1)).
double inverse_normal_cdf(double p);

/// Deterministic low-discrepancy sample of `count` points covering the
/// closed ball B(center; radius). Layout, in order:
///   [0]            the center,
///   [1 .. 2n]      the axis boundary points center +- radius * e_i,
///   [2n+1 .. ]     Halton points mapped uniformly into the ball
///                  (normal-inverse direction, r^(1/n) radius).
/// Prefixes of the sequence are nested, so enlarging `count` only adds
/// points. Throws ArgumentError for count < 1 or radius <= 0.
std::vector<Vector> ball_grid(const Vector& center, double radius, int count);

}  // namespace gptr
