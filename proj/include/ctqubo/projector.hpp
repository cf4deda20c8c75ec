#pragma once

#include <span>
#include <vector>

#include "ctqubo/image.hpp"

namespace ctqubo {

// Parallel-beam geometry for an n x n image. Angles are in degrees in
// [0, 180). At 0 degrees bin s collects image column s; at 90 degrees it
// collects image row s. The detector array is centered on the image center.
struct ProjectionGeometry {
  int n = 0;
  std::vector<double> angles;
  int n_bins = 0;
  double bin_width = 1.0;

  // n_bins <= 0 selects the default of one bin per image column.
  static ProjectionGeometry make(int n, std::vector<double> angles, int n_bins = 0,
                                 double bin_width = 1.0);

  int num_angles() const { return static_cast<int>(angles.size()); }
  int num_rows() const { return num_angles() * n_bins; }
  int row_index(int angle_index, int bin) const { return angle_index * n_bins + bin; }
  // Lower detector coordinate of bin s, in pixel units from the image center.
  double bin_lower(int bin) const;

  // Throws InvalidGeometry when an invariant is violated.
  void validate() const;

  bool operator==(const ProjectionGeometry&) const = default;
};

// {0, step, 2 step, ..., < 180}.
std::vector<double> angles_from_step(double step_degrees);
// count angles uniformly covering [0, 180).
std::vector<double> uniform_angles(int count);
// Smallest bin count whose detector span covers the image at every angle.
int covering_bin_count(int n, double bin_width = 1.0);

struct ProjectorEntry {
  int pixel = 0;
  double weight = 0.0;
};

// Discrete Radon transform as a row-compressed sparse matrix. Row
// (angle, bin) lists every pixel whose unit square overlaps the bin's strip,
// weighted by the overlap area.
class SparseProjector {
 public:
  SparseProjector() = default;
  SparseProjector(ProjectionGeometry geometry, std::vector<int> row_offsets,
                  std::vector<ProjectorEntry> entries);

  const ProjectionGeometry& geometry() const { return geometry_; }
  int num_rows() const { return static_cast<int>(row_offsets_.size()) - 1; }
  std::span<const ProjectorEntry> row(int row_index) const;
  std::span<const ProjectorEntry> row(int angle_index, int bin) const {
    return row(geometry_.row_index(angle_index, bin));
  }
  std::size_t num_entries() const { return entries_.size(); }

 private:
  ProjectionGeometry geometry_;
  std::vector<int> row_offsets_{0};
  std::vector<ProjectorEntry> entries_;
};

// Angle-major sinogram, values(angle_index, bin) = P(theta, s).
class Sinogram {
 public:
  Sinogram() = default;
  Sinogram(ProjectionGeometry geometry, std::vector<double> values);

  const ProjectionGeometry& geometry() const { return geometry_; }
  int num_angles() const { return geometry_.num_angles(); }
  int n_bins() const { return geometry_.n_bins; }
  double operator()(int angle_index, int bin) const {
    return values_[static_cast<std::size_t>(geometry_.row_index(angle_index, bin))];
  }
  double& at(int angle_index, int bin) {
    return values_[static_cast<std::size_t>(geometry_.row_index(angle_index, bin))];
  }
  std::span<const double> values() const { return values_; }
  std::span<const double> angle_row(int angle_index) const;

  // Sum of squared entries; the constant term of the reconstruction objective.
  double sum_of_squares() const;

  bool operator==(const Sinogram&) const = default;

 private:
  ProjectionGeometry geometry_;
  std::vector<double> values_;
};

// Rows flagged true are excluded from reconstruction (e.g. metal or ring
// artifact pixels). Empty mask excludes nothing.
struct SinogramMask {
  std::vector<bool> excluded;

  bool is_excluded(int row_index) const {
    return !excluded.empty() && excluded[static_cast<std::size_t>(row_index)];
  }
  int count() const;
};

// Overlap area of the unit pixel square (row, col) with the strip
// lower <= x cos(theta) + y sin(theta) <= upper, computed by clipping.
double pixel_strip_overlap(int n, int row, int col, double cos_theta, double sin_theta,
                           double lower, double upper);

// cos and sin of an angle in degrees, exact at multiples of 90.
std::pair<double, double> cos_sin_degrees(double degrees);

SparseProjector build_projector(const ProjectionGeometry& geometry);

// Throws ShapeError when the image side does not match the geometry.
Sinogram forward_project(const SparseProjector& projector, const ImageGrid& image);

}  // namespace ctqubo
