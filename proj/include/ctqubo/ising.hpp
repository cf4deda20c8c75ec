#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctqubo/qubo.hpp"

namespace ctqubo {

using Spins = std::vector<std::int8_t>;

// Spin form sum h_v s_v + sum_{u<v} J_uv s_u s_v with
// qubo_energy(q) == ising_energy(2q - 1) + conversion_offset.
struct IsingModel {
  int num_variables = 0;
  std::vector<LinearTerm> field;
  std::vector<QuadraticTerm> coupling;
  double conversion_offset = 0.0;

  double field_at(int var) const;
  double coupling_at(int u, int v) const;

  bool operator==(const IsingModel&) const = default;
};

// Substitutes q = (s + 1) / 2.
IsingModel to_ising(const QuboModel& model);

// Substitutes s = 2q - 1. The returned model carries reconstruction_offset
// as its offset; the spin constant cancels against conversion_offset.
QuboModel to_qubo(const IsingModel& model, double reconstruction_offset = 0.0);

// Throws InvalidSpin for entries other than -1/+1 and ShapeError on length mismatch.
double ising_energy(const IsingModel& model, std::span<const std::int8_t> spins);

Spins spins_from_bits(std::span<const std::uint8_t> bits);
Assignment bits_from_spins(std::span<const std::int8_t> spins);

}  // namespace ctqubo
