#pragma once

#include <vector>

#include "ctqubo/image.hpp"
#include "ctqubo/projector.hpp"

namespace ctqubo {

// Half-open detector window [row_begin, row_end) x [col_begin, col_end).
struct AirRegion {
  int row_begin = 0;
  int row_end = 0;
  int col_begin = 0;
  int col_end = 0;

  bool empty() const { return row_end <= row_begin || col_end <= col_begin; }
};

// Angle-ordered detector frames. Each frame row is one axial level; each
// column one detector bin. The air region is sample-free in every frame.
struct RawProjectionSet {
  std::vector<Raster> frames;
  std::vector<double> angles;
  AirRegion air_region;

  // Throws ShapeError / CalibrationError.
  void validate() const;
};

// Subtracts the per-frame mean over the air region.
RawProjectionSet subtract_air_background(const RawProjectionSet& raw);

// p -> -ln(max(p, eps) / reference), eps = 1e-9 reference.
RawProjectionSet beer_lambert_correct(const RawProjectionSet& raw, double reference_intensity);

struct SinogramExtraction {
  Sinogram sinogram;
  int clamped = 0;  // negative entries set to zero
};

// Stacks row axial_level of every frame. image_size <= 0 takes one image
// column per detector bin.
SinogramExtraction frames_to_sinogram(const RawProjectionSet& raw, int axial_level,
                                      int image_size = 0, double bin_width = 1.0);

// Nonzero entries of an angle x bin raster mark sinogram entries to drop.
SinogramMask mask_from_raster(const Raster& mask, const ProjectionGeometry& geometry);

}  // namespace ctqubo
