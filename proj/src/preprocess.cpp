#include "ctqubo/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctqubo/errors.hpp"

namespace ctqubo {

void RawProjectionSet::validate() const {
  if (frames.empty()) throw ShapeError("projection set has no frames");
  if (frames.size() != angles.size())
    throw ShapeError(std::to_string(frames.size()) + " frames but " +
                     std::to_string(angles.size()) + " angles");
  for (const auto& f : frames)
    if (f.rows != frames.front().rows || f.cols != frames.front().cols)
      throw ShapeError("frames differ in shape");
  for (std::size_t k = 1; k < angles.size(); ++k)
    if (angles[k] <= angles[k - 1]) throw ShapeError("frame angles must be strictly increasing");
  const auto& a = air_region;
  if (a.row_begin < 0 || a.col_begin < 0 || a.row_end > frames.front().rows ||
      a.col_end > frames.front().cols)
    throw CalibrationError("air region lies outside the frame");
}

RawProjectionSet subtract_air_background(const RawProjectionSet& raw) {
  raw.validate();
  const auto& a = raw.air_region;
  if (a.empty()) throw CalibrationError("air region is empty");
  RawProjectionSet out = raw;
  const double count = static_cast<double>(a.row_end - a.row_begin) * (a.col_end - a.col_begin);
  for (auto& frame : out.frames) {
    double sum = 0.0;
    for (int r = a.row_begin; r < a.row_end; ++r)
      for (int c = a.col_begin; c < a.col_end; ++c) sum += frame(r, c);
    const double mean = sum / count;
    for (auto& v : frame.values) v -= mean;
  }
  return out;
}

RawProjectionSet beer_lambert_correct(const RawProjectionSet& raw, double reference_intensity) {
  raw.validate();
  if (!std::isfinite(reference_intensity) || reference_intensity <= 0.0)
    throw CalibrationError("reference intensity must be positive");
  const double floor = 1e-9 * reference_intensity;
  RawProjectionSet out = raw;
  for (auto& frame : out.frames)
    for (auto& v : frame.values) v = -std::log(std::max(v, floor) / reference_intensity);
  return out;
}

SinogramExtraction frames_to_sinogram(const RawProjectionSet& raw, int axial_level,
                                      int image_size, double bin_width) {
  raw.validate();
  const int rows = raw.frames.front().rows;
  const int bins = raw.frames.front().cols;
  if (axial_level < 0 || axial_level >= rows)
    throw ShapeError("axial level " + std::to_string(axial_level) + " outside [0, " +
                     std::to_string(rows) + ")");
  auto geometry = ProjectionGeometry::make(image_size > 0 ? image_size : bins, raw.angles, bins,
                                           bin_width);
  SinogramExtraction out;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(geometry.num_rows()));
  for (const auto& frame : raw.frames) {
    for (int c = 0; c < bins; ++c) {
      double v = frame(axial_level, c);
      if (v < 0.0) {
        v = 0.0;
        ++out.clamped;
      }
      values.push_back(v);
    }
  }
  out.sinogram = Sinogram(std::move(geometry), std::move(values));
  return out;
}

SinogramMask mask_from_raster(const Raster& mask, const ProjectionGeometry& geometry) {
  if (mask.rows != geometry.num_angles() || mask.cols != geometry.n_bins)
    throw ShapeError("mask is " + std::to_string(mask.rows) + "x" + std::to_string(mask.cols) +
                     " but the sinogram is " + std::to_string(geometry.num_angles()) + "x" +
                     std::to_string(geometry.n_bins));
  SinogramMask out;
  out.excluded.resize(mask.values.size());
  for (std::size_t k = 0; k < mask.values.size(); ++k) out.excluded[k] = mask.values[k] != 0.0;
  return out;
}

}  // namespace ctqubo
