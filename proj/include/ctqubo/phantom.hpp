#pragma once

#include <cstdint>

#include "ctqubo/image.hpp"

namespace ctqubo {

struct PhantomMode {
  enum class Kind { binary, quantized };
  Kind kind = Kind::binary;
  int levels = 2;

  static PhantomMode binary() { return {Kind::binary, 2}; }
  static PhantomMode quantized(int levels) { return {Kind::quantized, levels}; }
};

// Continuous modified Shepp-Logan value at (x, y) in [-1, 1]^2, y pointing up.
// Clamped to [0, 1].
double shepp_logan_value(double x, double y);

// Ten-ellipse Shepp-Logan phantom sampled once per pixel center on an n x n
// grid spanning [-1, 1]^2. Binary mode maps value > 0 to 1. Quantized mode
// maps v to ceil(v * (levels - 1)), so levels = 2 coincides with binary.
ImageGrid make_shepp_logan(int n, PhantomMode mode);

// Uniform random integer image in [0, 2^bit_depth - 1]; deterministic in seed.
ImageGrid make_random_image(int n, int bit_depth, std::uint64_t seed);

}  // namespace ctqubo
