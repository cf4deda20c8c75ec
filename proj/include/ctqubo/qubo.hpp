#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctqubo/image.hpp"
#include "ctqubo/projector.hpp"

namespace ctqubo {

using Assignment = std::vector<std::uint8_t>;

// Binary expansion of integer pixels: pixel (i, j) = sum_k 2^k q[(i n + j) b + k].
struct BitEncoding {
  int n = 0;
  int bits_per_pixel = 1;

  BitEncoding(int n, int bits_per_pixel);

  int num_variables() const { return n * n * bits_per_pixel; }
  int variable_index(int row, int col, int bit) const {
    return (row * n + col) * bits_per_pixel + bit;
  }
  // Largest encodable pixel value, 2^bits - 1.
  double max_value() const;
};

// Throws InvalidValue when a pixel is non-integral or exceeds the encoding range.
Assignment encode(const BitEncoding& encoding, const ImageGrid& image);
ImageGrid decode(const BitEncoding& encoding, std::span<const std::uint8_t> assignment);

struct LinearTerm {
  int var = 0;
  double coeff = 0.0;
  bool operator==(const LinearTerm&) const = default;
};

struct QuadraticTerm {
  int u = 0;
  int v = 0;
  double coeff = 0.0;
  bool operator==(const QuadraticTerm&) const = default;
};

// Upper-triangular quadratic form over binary variables. Terms are sorted by
// index with no stored zeros. offset is the constant that the energy omits;
// for reconstruction models it is the sum of squared sinogram values.
class QuboModel {
 public:
  QuboModel() = default;
  // Merges duplicates, drops |coeff| < 1e-12, and validates u < v < num_variables.
  QuboModel(int num_variables, std::vector<LinearTerm> linear,
            std::vector<QuadraticTerm> quadratic, double offset = 0.0);

  int num_variables() const { return num_variables_; }
  const std::vector<LinearTerm>& linear() const { return linear_; }
  const std::vector<QuadraticTerm>& quadratic() const { return quadratic_; }
  double offset() const { return offset_; }

  double linear_at(int var) const;
  double quadratic_at(int u, int v) const;

  // Row-major dense upper-triangular matrix, diagonal = linear terms.
  std::vector<double> to_dense_upper() const;

  bool operator==(const QuboModel&) const = default;

 private:
  int num_variables_ = 0;
  std::vector<LinearTerm> linear_;
  std::vector<QuadraticTerm> quadratic_;
  double offset_ = 0.0;
};

// Expands sum over unmasked rows of (sum_v w_v q_v - P_r)^2 with
// w_v = c_pixel 2^k, dropping the constant sum P_r^2 into the offset.
QuboModel build_qubo(const SparseProjector& projector, const Sinogram& target, int bits_per_pixel,
                     const SinogramMask& mask = {});

// Energy without the offset.
double qubo_energy(const QuboModel& model, std::span<const std::uint8_t> assignment);

}  // namespace ctqubo
