#include "ctqubo/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "ctqubo/errors.hpp"

namespace ctqubo {

namespace {

constexpr double kDropCoeff = 1e-12;

void check_assignment(int num_variables, std::span<const std::uint8_t> assignment) {
  if (assignment.size() != static_cast<std::size_t>(num_variables))
    throw ShapeError("assignment has " + std::to_string(assignment.size()) +
                     " entries, model has " + std::to_string(num_variables) + " variables");
}

}  // namespace

BitEncoding::BitEncoding(int n, int bits_per_pixel) : n(n), bits_per_pixel(bits_per_pixel) {
  if (n < 1) throw InvalidDimension("encoding image side must be positive");
  if (bits_per_pixel < 1 || bits_per_pixel > 30)
    throw InvalidEncoding("bits per pixel must be in [1, 30], got " +
                          std::to_string(bits_per_pixel));
}

double BitEncoding::max_value() const {
  return static_cast<double>((std::int64_t{1} << bits_per_pixel) - 1);
}

Assignment encode(const BitEncoding& encoding, const ImageGrid& image) {
  if (image.rows() != encoding.n || image.cols() != encoding.n)
    throw ShapeError("image does not match encoding side " + std::to_string(encoding.n));
  Assignment out(static_cast<std::size_t>(encoding.num_variables()), 0);
  for (int i = 0; i < encoding.n; ++i) {
    for (int j = 0; j < encoding.n; ++j) {
      const double v = image(i, j);
      if (v != std::floor(v) || v > encoding.max_value())
        throw InvalidValue("pixel value " + std::to_string(v) + " is not encodable in " +
                           std::to_string(encoding.bits_per_pixel) + " bits");
      const auto bits = static_cast<std::int64_t>(v);
      for (int k = 0; k < encoding.bits_per_pixel; ++k)
        out[static_cast<std::size_t>(encoding.variable_index(i, j, k))] =
            static_cast<std::uint8_t>((bits >> k) & 1);
    }
  }
  return out;
}

ImageGrid decode(const BitEncoding& encoding, std::span<const std::uint8_t> assignment) {
  check_assignment(encoding.num_variables(), assignment);
  std::vector<double> pixels(static_cast<std::size_t>(encoding.n) * encoding.n, 0.0);
  for (int i = 0; i < encoding.n; ++i) {
    for (int j = 0; j < encoding.n; ++j) {
      std::int64_t value = 0;
      for (int k = 0; k < encoding.bits_per_pixel; ++k)
        if (assignment[static_cast<std::size_t>(encoding.variable_index(i, j, k))])
          value += std::int64_t{1} << k;
      pixels[static_cast<std::size_t>(i) * encoding.n + j] = static_cast<double>(value);
    }
  }
  return ImageGrid(encoding.n, encoding.n, std::move(pixels));
}

QuboModel::QuboModel(int num_variables, std::vector<LinearTerm> linear,
                     std::vector<QuadraticTerm> quadratic, double offset)
    : num_variables_(num_variables), offset_(offset) {
  if (num_variables < 0) throw InvalidDimension("variable count must be non-negative");
  if (!std::isfinite(offset)) throw InvalidValue("offset must be finite");

  std::sort(linear.begin(), linear.end(),
            [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
  for (const auto& t : linear) {
    if (t.var < 0 || t.var >= num_variables)
      throw ShapeError("linear term index " + std::to_string(t.var) + " out of range");
    if (!linear_.empty() && linear_.back().var == t.var)
      linear_.back().coeff += t.coeff;
    else
      linear_.push_back(t);
  }
  std::erase_if(linear_, [](const LinearTerm& t) { return std::abs(t.coeff) < kDropCoeff; });

  for (auto& t : quadratic) {
    if (t.u > t.v) std::swap(t.u, t.v);
    if (t.u == t.v || t.u < 0 || t.v >= num_variables)
      throw ShapeError("quadratic term (" + std::to_string(t.u) + ", " + std::to_string(t.v) +
                       ") is not a valid off-diagonal pair");
  }
  std::sort(quadratic.begin(), quadratic.end(), [](const QuadraticTerm& a, const QuadraticTerm& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (const auto& t : quadratic) {
    if (!quadratic_.empty() && quadratic_.back().u == t.u && quadratic_.back().v == t.v)
      quadratic_.back().coeff += t.coeff;
    else
      quadratic_.push_back(t);
  }
  std::erase_if(quadratic_,
                [](const QuadraticTerm& t) { return std::abs(t.coeff) < kDropCoeff; });
}

double QuboModel::linear_at(int var) const {
  auto it = std::lower_bound(linear_.begin(), linear_.end(), var,
                             [](const LinearTerm& t, int v) { return t.var < v; });
  return it != linear_.end() && it->var == var ? it->coeff : 0.0;
}

double QuboModel::quadratic_at(int u, int v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(quadratic_.begin(), quadratic_.end(), std::pair{u, v},
                             [](const QuadraticTerm& t, std::pair<int, int> key) {
                               return std::pair{t.u, t.v} < key;
                             });
  return it != quadratic_.end() && it->u == u && it->v == v ? it->coeff : 0.0;
}

std::vector<double> QuboModel::to_dense_upper() const {
  const auto n = static_cast<std::size_t>(num_variables_);
  std::vector<double> dense(n * n, 0.0);
  for (const auto& t : linear_) dense[static_cast<std::size_t>(t.var) * (n + 1)] = t.coeff;
  for (const auto& t : quadratic_)
    dense[static_cast<std::size_t>(t.u) * n + static_cast<std::size_t>(t.v)] = t.coeff;
  return dense;
}

QuboModel build_qubo(const SparseProjector& projector, const Sinogram& target, int bits_per_pixel,
                     const SinogramMask& mask) {
  const auto& g = projector.geometry();
  if (bits_per_pixel < 1)
    throw InvalidEncoding("bits per pixel must be at least 1, got " +
                          std::to_string(bits_per_pixel));
  if (target.num_angles() != g.num_angles() || target.n_bins() != g.n_bins)
    throw ShapeError("sinogram is " + std::to_string(target.num_angles()) + "x" +
                     std::to_string(target.n_bins()) + " but projector expects " +
                     std::to_string(g.num_angles()) + "x" + std::to_string(g.n_bins));
  if (!mask.excluded.empty() && mask.excluded.size() != static_cast<std::size_t>(g.num_rows()))
    throw ShapeError("mask size does not match the sinogram");
  const BitEncoding encoding(g.n, bits_per_pixel);
  const auto num_vars = static_cast<std::uint64_t>(encoding.num_variables());

  std::vector<double> linear(num_vars, 0.0);
  std::unordered_map<std::uint64_t, double> pairs;
  double offset = 0.0;

  struct Weighted {
    int var;
    double w;
  };
  std::vector<Weighted> row_vars;
  const auto target_values = target.values();
  for (int r = 0; r < g.num_rows(); ++r) {
    if (mask.is_excluded(r)) continue;
    const double p = target_values[static_cast<std::size_t>(r)];
    row_vars.clear();
    for (const auto& e : projector.row(r)) {
      double scale = 1.0;
      for (int k = 0; k < bits_per_pixel; ++k, scale *= 2.0)
        row_vars.push_back({e.pixel * bits_per_pixel + k, e.weight * scale});
    }
    // (sum w q - p)^2 = sum (w^2 - 2 p w) q + sum_{u<v} 2 w_u w_v q_u q_v + p^2, using q^2 = q
    for (std::size_t a = 0; a < row_vars.size(); ++a) {
      const auto& ua = row_vars[a];
      linear[static_cast<std::size_t>(ua.var)] += ua.w * ua.w - 2.0 * p * ua.w;
      for (std::size_t b = a + 1; b < row_vars.size(); ++b) {
        const auto& vb = row_vars[b];
        const auto lo = static_cast<std::uint64_t>(std::min(ua.var, vb.var));
        const auto hi = static_cast<std::uint64_t>(std::max(ua.var, vb.var));
        pairs[lo * num_vars + hi] += 2.0 * ua.w * vb.w;
      }
    }
    offset += p * p;
  }

  std::vector<LinearTerm> lin;
  for (std::size_t v = 0; v < linear.size(); ++v)
    if (linear[v] != 0.0) lin.push_back({static_cast<int>(v), linear[v]});
  std::vector<QuadraticTerm> quad;
  quad.reserve(pairs.size());
  for (const auto& [key, coeff] : pairs)
    quad.push_back({static_cast<int>(key / num_vars), static_cast<int>(key % num_vars), coeff});
  return QuboModel(encoding.num_variables(), std::move(lin), std::move(quad), offset);
}

double qubo_energy(const QuboModel& model, std::span<const std::uint8_t> assignment) {
  check_assignment(model.num_variables(), assignment);
  double energy = 0.0;
  for (const auto& t : model.linear())
    if (assignment[static_cast<std::size_t>(t.var)]) energy += t.coeff;
  for (const auto& t : model.quadratic())
    if (assignment[static_cast<std::size_t>(t.u)] && assignment[static_cast<std::size_t>(t.v)])
      energy += t.coeff;
  return energy;
}

}  // namespace ctqubo
