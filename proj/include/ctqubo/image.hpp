#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctqubo {

// Row-major real raster without sign constraints. Used for detector frames
// and signed difference images.
struct Raster {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  Raster() = default;
  Raster(int rows, int cols, double fill = 0.0);
  Raster(int rows, int cols, std::vector<double> values);

  double& operator()(int r, int c) { return values[index(r, c)]; }
  double operator()(int r, int c) const { return values[index(r, c)]; }
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c);
  }
  std::size_t size() const { return values.size(); }

  bool operator==(const Raster&) const = default;
};

// Dense non-negative image of attenuation numbers. Values are integers when
// the grid comes from a bit encoding or a quantized phantom.
class ImageGrid {
 public:
  ImageGrid() = default;
  ImageGrid(int rows, int cols, std::vector<double> values);
  static ImageGrid zeros(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  double operator()(int r, int c) const { return values_[index(r, c)]; }
  // Throws InvalidValue for negative or non-finite values.
  void set(int r, int c, double value);

  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
  }

  bool is_integral() const;
  double max_value() const;
  ImageGrid transposed() const;
  Raster to_raster() const { return Raster(rows_, cols_, values_); }

  bool operator==(const ImageGrid&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

}  // namespace ctqubo
