#include "ctqubo/recon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctqubo/errors.hpp"

namespace ctqubo {

namespace {

void check_same_shape(const ImageGrid& a, const ImageGrid& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("images differ in shape: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
}

double round_half_up(double v) { return std::floor(v + 0.5); }

}  // namespace

ImageGrid reconstruct(const SolveResult& result, const BitEncoding& encoding) {
  return decode(encoding, result.best_assignment);
}

double energy_relative_error(double achieved, double expected) {
  return std::abs(achieved - expected) / std::max(1.0, std::abs(expected));
}

ReconReport compare(const ImageGrid& reconstructed, const ImageGrid& reference,
                    double energy_achieved, double energy_expected) {
  check_same_shape(reconstructed, reference);
  ReconReport report;
  report.reconstructed = reconstructed;
  report.reference = reference;
  const auto a = reconstructed.values();
  const auto b = reference.values();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = std::abs(round_half_up(a[k]) - round_half_up(b[k]));
    if (diff != 0.0) ++report.mismatched_pixels;
    report.max_abs_diff = std::max(report.max_abs_diff, diff);
  }
  report.pixel_mismatch_fraction =
      static_cast<double>(report.mismatched_pixels) / static_cast<double>(a.size());
  report.energy_achieved = energy_achieved;
  report.energy_expected = energy_expected;
  report.energy_relative_error = energy_relative_error(energy_achieved, energy_expected);
  return report;
}

Raster difference_image(const ImageGrid& reconstructed, const ImageGrid& reference) {
  check_same_shape(reconstructed, reference);
  Raster out(reconstructed.rows(), reconstructed.cols());
  const auto a = reconstructed.values();
  const auto b = reference.values();
  for (std::size_t k = 0; k < a.size(); ++k) out.values[k] = a[k] - b[k];
  return out;
}

}  // namespace ctqubo
