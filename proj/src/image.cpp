#include "ctqubo/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctqubo/errors.hpp"

namespace ctqubo {

namespace {

void check_dimensions(int rows, int cols, std::size_t count) {
  if (rows <= 0 || cols <= 0) {
    throw InvalidDimension("raster dimensions must be positive, got " + std::to_string(rows) +
                           "x" + std::to_string(cols));
  }
  if (count != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw ShapeError("raster of " + std::to_string(rows) + "x" + std::to_string(cols) +
                     " given " + std::to_string(count) + " values");
  }
}

void check_pixel(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw InvalidValue("image pixels must be finite and non-negative, got " +
                       std::to_string(value));
  }
}

}  // namespace

Raster::Raster(int rows, int cols, double fill)
    : rows(rows), cols(cols) {
  check_dimensions(rows, cols, static_cast<std::size_t>(std::max(rows, 0)) * std::max(cols, 0));
  values.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
}

Raster::Raster(int rows, int cols, std::vector<double> values)
    : rows(rows), cols(cols), values(std::move(values)) {
  check_dimensions(rows, cols, this->values.size());
}

ImageGrid::ImageGrid(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  check_dimensions(rows, cols, values_.size());
  for (double v : values_) check_pixel(v);
}

ImageGrid ImageGrid::zeros(int rows, int cols) {
  check_dimensions(rows, cols, static_cast<std::size_t>(std::max(rows, 0)) * std::max(cols, 0));
  return ImageGrid(rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0));
}

void ImageGrid::set(int r, int c, double value) {
  check_pixel(value);
  values_[index(r, c)] = value;
}

bool ImageGrid::is_integral() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == std::floor(v); });
}

double ImageGrid::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

ImageGrid ImageGrid::transposed() const {
  std::vector<double> out(values_.size());
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      out[static_cast<std::size_t>(c) * rows_ + r] = values_[index(r, c)];
  return ImageGrid(cols_, rows_, std::move(out));
}

}  // namespace ctqubo
