#include "ctqubo/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ctqubo/errors.hpp"

namespace ctqubo {

namespace {

struct Ellipse {
  int intensity_tenths;  // additive intensity x 10, keeps region sums exact
  double semi_x;
  double semi_y;
  double center_x;
  double center_y;
  double rotation_deg;
};

// Modified (Toft) Shepp-Logan table.
constexpr std::array<Ellipse, 10> kEllipses{{
    {10, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

bool inside(const Ellipse& e, double x, double y) {
  const double phi = e.rotation_deg * std::numbers::pi / 180.0;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double dx = x - e.center_x;
  const double dy = y - e.center_y;
  const double u = (dx * c + dy * s) / e.semi_x;
  const double v = (-dx * s + dy * c) / e.semi_y;
  return u * u + v * v <= 1.0;
}

int value_tenths(double x, double y) {
  int total = 0;
  for (const auto& e : kEllipses)
    if (inside(e, x, y)) total += e.intensity_tenths;
  return std::clamp(total, 0, 10);
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

double shepp_logan_value(double x, double y) { return value_tenths(x, y) / 10.0; }

ImageGrid make_shepp_logan(int n, PhantomMode mode) {
  if (n < 2) throw InvalidDimension("phantom size must be at least 2, got " + std::to_string(n));
  if (mode.kind == PhantomMode::Kind::quantized &&
      (mode.levels < 2 || !is_power_of_two(mode.levels))) {
    throw InvalidQuantization("quantization levels must be a power of two >= 2, got " +
                              std::to_string(mode.levels));
  }
  const std::int64_t top = mode.kind == PhantomMode::Kind::binary ? 1 : mode.levels - 1;

  std::vector<double> values(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double y = 1.0 - (2.0 * i + 1.0) / n;
    for (int j = 0; j < n; ++j) {
      const double x = (2.0 * j + 1.0) / n - 1.0;
      const std::int64_t tenths = value_tenths(x, y);
      // ceil(tenths * top / 10) in integers
      values[static_cast<std::size_t>(i) * n + j] =
          static_cast<double>((tenths * top + 9) / 10);
    }
  }
  return ImageGrid(n, n, std::move(values));
}

ImageGrid make_random_image(int n, int bit_depth, std::uint64_t seed) {
  if (n < 1) throw InvalidDimension("image size must be positive, got " + std::to_string(n));
  if (bit_depth < 1 || bit_depth > 52)
    throw InvalidEncoding("bit depth must be in [1, 52], got " + std::to_string(bit_depth));
  std::mt19937_64 rng(seed);
  const std::uint64_t mask = (std::uint64_t{1} << bit_depth) - 1;
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  for (auto& v : values) v = static_cast<double>(rng() & mask);
  return ImageGrid(n, n, std::move(values));
}

}  // namespace ctqubo
