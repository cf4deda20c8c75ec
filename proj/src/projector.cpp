#include "ctqubo/projector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ctqubo/errors.hpp"

namespace ctqubo {

namespace {

constexpr double kDropWeight = 1e-12;

struct Point {
  double x;
  double y;
};

// Convex polygon with room for a square clipped by two half-planes.
struct Polygon {
  std::array<Point, 8> pts{};
  int size = 0;

  void push(Point p) { pts[static_cast<std::size_t>(size++)] = p; }

  double area() const {
    double twice = 0.0;
    for (int k = 0; k < size; ++k) {
      const Point& a = pts[static_cast<std::size_t>(k)];
      const Point& b = pts[static_cast<std::size_t>((k + 1) % size)];
      twice += a.x * b.y - b.x * a.y;
    }
    return std::abs(twice) * 0.5;
  }
};

// Keeps the part of poly where sign * (x c + y s - level) >= 0.
Polygon clip(const Polygon& poly, double c, double s, double level, double sign) {
  Polygon out;
  for (int k = 0; k < poly.size; ++k) {
    const Point& a = poly.pts[static_cast<std::size_t>(k)];
    const Point& b = poly.pts[static_cast<std::size_t>((k + 1) % poly.size)];
    const double da = sign * (a.x * c + a.y * s - level);
    const double db = sign * (b.x * c + b.y * s - level);
    if (da >= 0.0) out.push(a);
    if ((da >= 0.0) != (db >= 0.0) && da != 0.0 && db != 0.0) {
      const double t = da / (da - db);
      out.push({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

}  // namespace

std::pair<double, double> cos_sin_degrees(double degrees) {
  const double reduced = std::fmod(degrees, 360.0);
  if (reduced == 0.0) return {1.0, 0.0};
  if (reduced == 90.0 || reduced == -270.0) return {0.0, 1.0};
  if (reduced == 180.0 || reduced == -180.0) return {-1.0, 0.0};
  if (reduced == 270.0 || reduced == -90.0) return {0.0, -1.0};
  const double rad = degrees * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

ProjectionGeometry ProjectionGeometry::make(int n, std::vector<double> angles, int n_bins,
                                            double bin_width) {
  ProjectionGeometry g{n, std::move(angles), n_bins > 0 ? n_bins : n, bin_width};
  g.validate();
  return g;
}

double ProjectionGeometry::bin_lower(int bin) const {
  return (bin - n_bins / 2.0) * bin_width;
}

void ProjectionGeometry::validate() const {
  if (n < 1) throw InvalidGeometry("image side must be positive, got " + std::to_string(n));
  if (angles.empty()) throw InvalidGeometry("at least one projection angle is required");
  for (std::size_t k = 0; k < angles.size(); ++k) {
    if (!std::isfinite(angles[k]) || angles[k] < 0.0 || angles[k] >= 180.0)
      throw InvalidGeometry("angle " + std::to_string(angles[k]) + " outside [0, 180)");
    if (k > 0 && angles[k] <= angles[k - 1])
      throw InvalidGeometry("angles must be strictly increasing");
  }
  if (n_bins < 1) throw InvalidGeometry("bin count must be positive");
  if (!std::isfinite(bin_width) || bin_width <= 0.0)
    throw InvalidGeometry("bin width must be positive");
}

std::vector<double> angles_from_step(double step_degrees) {
  if (!std::isfinite(step_degrees) || step_degrees <= 0.0 || step_degrees > 180.0)
    throw InvalidGeometry("angle step must be in (0, 180]");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double a = k * step_degrees;
    // tolerate a step that divides 180 up to rounding
    if (a >= 180.0 - 1e-9) break;
    out.push_back(a);
  }
  return out;
}

std::vector<double> uniform_angles(int count) {
  if (count < 1) throw InvalidGeometry("angle count must be positive");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = 180.0 * k / count;
  return out;
}

int covering_bin_count(int n, double bin_width) {
  return static_cast<int>(std::ceil(n * std::numbers::sqrt2 / bin_width - 1e-12));
}

SparseProjector::SparseProjector(ProjectionGeometry geometry, std::vector<int> row_offsets,
                                 std::vector<ProjectorEntry> entries)
    : geometry_(std::move(geometry)),
      row_offsets_(std::move(row_offsets)),
      entries_(std::move(entries)) {}

std::span<const ProjectorEntry> SparseProjector::row(int row_index) const {
  const auto b = static_cast<std::size_t>(row_offsets_[static_cast<std::size_t>(row_index)]);
  const auto e = static_cast<std::size_t>(row_offsets_[static_cast<std::size_t>(row_index) + 1]);
  return std::span<const ProjectorEntry>(entries_).subspan(b, e - b);
}

Sinogram::Sinogram(ProjectionGeometry geometry, std::vector<double> values)
    : geometry_(std::move(geometry)), values_(std::move(values)) {
  geometry_.validate();
  if (values_.size() != static_cast<std::size_t>(geometry_.num_rows()))
    throw ShapeError("sinogram needs " + std::to_string(geometry_.num_rows()) + " values, got " +
                     std::to_string(values_.size()));
}

std::span<const double> Sinogram::angle_row(int angle_index) const {
  return std::span<const double>(values_).subspan(
      static_cast<std::size_t>(angle_index) * geometry_.n_bins,
      static_cast<std::size_t>(geometry_.n_bins));
}

double Sinogram::sum_of_squares() const {
  double total = 0.0;
  for (double v : values_) total += v * v;
  return total;
}

int SinogramMask::count() const {
  return static_cast<int>(std::count(excluded.begin(), excluded.end(), true));
}

double pixel_strip_overlap(int n, int row, int col, double cos_theta, double sin_theta,
                           double lower, double upper) {
  const double center = (n - 1) / 2.0;
  const double x0 = col - center - 0.5;
  const double y0 = row - center - 0.5;
  Polygon square;
  square.push({x0, y0});
  square.push({x0 + 1.0, y0});
  square.push({x0 + 1.0, y0 + 1.0});
  square.push({x0, y0 + 1.0});
  Polygon clipped = clip(square, cos_theta, sin_theta, lower, 1.0);
  if (clipped.size < 3) return 0.0;
  clipped = clip(clipped, cos_theta, sin_theta, upper, -1.0);
  if (clipped.size < 3) return 0.0;
  return clipped.area();
}

SparseProjector build_projector(const ProjectionGeometry& geometry) {
  geometry.validate();
  const int n = geometry.n;
  const int bins = geometry.n_bins;
  const double width = geometry.bin_width;
  const double center = (n - 1) / 2.0;

  std::vector<std::vector<ProjectorEntry>> rows(static_cast<std::size_t>(geometry.num_rows()));
  for (int a = 0; a < geometry.num_angles(); ++a) {
    const auto [c, s] = cos_sin_degrees(geometry.angles[static_cast<std::size_t>(a)]);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double t = (j - center) * c + (i - center) * s;
        const double half = 0.5 * (std::abs(c) + std::abs(s));
        const double t_min = t - half;
        const double t_max = t + half;
        const int first = std::max(0, static_cast<int>(std::floor(t_min / width + bins / 2.0)));
        const int last =
            std::min(bins - 1, static_cast<int>(std::ceil(t_max / width + bins / 2.0)) - 1);
        for (int b = first; b <= last; ++b) {
          const double lower = geometry.bin_lower(b);
          const double upper = lower + width;
          double w;
          if (t_min >= lower && t_max <= upper) {
            w = 1.0;
          } else {
            w = pixel_strip_overlap(n, i, j, c, s, lower, upper);
          }
          if (w >= kDropWeight)
            rows[static_cast<std::size_t>(geometry.row_index(a, b))].push_back({i * n + j, w});
        }
      }
    }
  }

  std::vector<int> offsets(rows.size() + 1, 0);
  for (std::size_t r = 0; r < rows.size(); ++r)
    offsets[r + 1] = offsets[r] + static_cast<int>(rows[r].size());
  std::vector<ProjectorEntry> entries;
  entries.reserve(static_cast<std::size_t>(offsets.back()));
  for (const auto& r : rows) entries.insert(entries.end(), r.begin(), r.end());
  return SparseProjector(geometry, std::move(offsets), std::move(entries));
}

Sinogram forward_project(const SparseProjector& projector, const ImageGrid& image) {
  const auto& g = projector.geometry();
  if (image.rows() != g.n || image.cols() != g.n)
    throw ShapeError("image is " + std::to_string(image.rows()) + "x" +
                     std::to_string(image.cols()) + " but geometry expects " +
                     std::to_string(g.n) + "x" + std::to_string(g.n));
  const auto pixels = image.values();
  std::vector<double> values(static_cast<std::size_t>(g.num_rows()), 0.0);
  for (int r = 0; r < g.num_rows(); ++r) {
    double sum = 0.0;
    for (const auto& e : projector.row(r)) sum += e.weight * pixels[static_cast<std::size_t>(e.pixel)];
    values[static_cast<std::size_t>(r)] = sum;
  }
  return Sinogram(g, std::move(values));
}

}  // namespace ctqubo
