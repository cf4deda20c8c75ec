#pragma once

#include <optional>

#include "ctqubo/image.hpp"
#include "ctqubo/qubo.hpp"
#include "ctqubo/solver.hpp"

namespace ctqubo {

struct ReconReport {
  ImageGrid reconstructed;
  std::optional<ImageGrid> reference;
  int mismatched_pixels = 0;
  double max_abs_diff = 0.0;
  double pixel_mismatch_fraction = 0.0;
  double energy_achieved = 0.0;
  double energy_expected = 0.0;
  double energy_relative_error = 0.0;
};

ImageGrid reconstruct(const SolveResult& result, const BitEncoding& encoding);

// Pixels are compared after rounding half-up to integers, so real-valued
// references are judged on the same integer lattice as the encoding.
ReconReport compare(const ImageGrid& reconstructed, const ImageGrid& reference,
                    double energy_achieved, double energy_expected);

// |achieved - expected| / max(1, |expected|).
double energy_relative_error(double achieved, double expected);

// reconstructed - reference, per pixel.
Raster difference_image(const ImageGrid& reconstructed, const ImageGrid& reference);

}  // namespace ctqubo
