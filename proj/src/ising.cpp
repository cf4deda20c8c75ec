#include "ctqubo/ising.hpp"

#include <algorithm>
#include <string>

#include "ctqubo/errors.hpp"

namespace ctqubo {

double IsingModel::field_at(int var) const {
  auto it = std::lower_bound(field.begin(), field.end(), var,
                             [](const LinearTerm& t, int v) { return t.var < v; });
  return it != field.end() && it->var == var ? it->coeff : 0.0;
}

double IsingModel::coupling_at(int u, int v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(coupling.begin(), coupling.end(), std::pair{u, v},
                             [](const QuadraticTerm& t, std::pair<int, int> key) {
                               return std::pair{t.u, t.v} < key;
                             });
  return it != coupling.end() && it->u == u && it->v == v ? it->coeff : 0.0;
}

IsingModel to_ising(const QuboModel& model) {
  const auto n = static_cast<std::size_t>(model.num_variables());
  std::vector<double> h(n, 0.0);
  double offset = 0.0;
  for (const auto& t : model.linear()) {
    h[static_cast<std::size_t>(t.var)] += t.coeff / 2.0;
    offset += t.coeff / 2.0;
  }
  IsingModel out;
  out.num_variables = model.num_variables();
  out.coupling.reserve(model.quadratic().size());
  for (const auto& t : model.quadratic()) {
    const double quarter = t.coeff / 4.0;
    h[static_cast<std::size_t>(t.u)] += quarter;
    h[static_cast<std::size_t>(t.v)] += quarter;
    offset += quarter;
    out.coupling.push_back({t.u, t.v, quarter});
  }
  for (std::size_t v = 0; v < n; ++v)
    if (h[v] != 0.0) out.field.push_back({static_cast<int>(v), h[v]});
  out.conversion_offset = offset;
  return out;
}

QuboModel to_qubo(const IsingModel& model, double reconstruction_offset) {
  const auto n = static_cast<std::size_t>(model.num_variables);
  std::vector<double> diag(n, 0.0);
  for (const auto& t : model.field) diag[static_cast<std::size_t>(t.var)] += 2.0 * t.coeff;
  std::vector<QuadraticTerm> quad;
  quad.reserve(model.coupling.size());
  for (const auto& t : model.coupling) {
    diag[static_cast<std::size_t>(t.u)] -= 2.0 * t.coeff;
    diag[static_cast<std::size_t>(t.v)] -= 2.0 * t.coeff;
    quad.push_back({t.u, t.v, 4.0 * t.coeff});
  }
  std::vector<LinearTerm> lin;
  for (std::size_t v = 0; v < n; ++v)
    if (diag[v] != 0.0) lin.push_back({static_cast<int>(v), diag[v]});
  return QuboModel(model.num_variables, std::move(lin), std::move(quad), reconstruction_offset);
}

double ising_energy(const IsingModel& model, std::span<const std::int8_t> spins) {
  if (spins.size() != static_cast<std::size_t>(model.num_variables))
    throw ShapeError("spin vector has " + std::to_string(spins.size()) + " entries, model has " +
                     std::to_string(model.num_variables));
  for (std::size_t k = 0; k < spins.size(); ++k)
    if (spins[k] != 1 && spins[k] != -1)
      throw InvalidSpin("spin " + std::to_string(k) + " is " + std::to_string(spins[k]) +
                        ", expected -1 or +1");
  double energy = 0.0;
  for (const auto& t : model.field) energy += t.coeff * spins[static_cast<std::size_t>(t.var)];
  for (const auto& t : model.coupling)
    energy += t.coeff * spins[static_cast<std::size_t>(t.u)] * spins[static_cast<std::size_t>(t.v)];
  return energy;
}

Spins spins_from_bits(std::span<const std::uint8_t> bits) {
  Spins out(bits.size());
  std::transform(bits.begin(), bits.end(), out.begin(),
                 [](std::uint8_t b) { return static_cast<std::int8_t>(b ? 1 : -1); });
  return out;
}

Assignment bits_from_spins(std::span<const std::int8_t> spins) {
  Assignment out(spins.size());
  for (std::size_t k = 0; k < spins.size(); ++k) {
    if (spins[k] != 1 && spins[k] != -1) throw InvalidSpin("spin values must be -1 or +1");
    out[k] = spins[k] > 0 ? 1 : 0;
  }
  return out;
}

}  // namespace ctqubo
