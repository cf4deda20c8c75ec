#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctqubo/qubo.hpp"

namespace ctqubo {

struct SolveResult {
  Assignment best_assignment;
  double best_energy = 0.0;
  std::int64_t occurrences = 0;
  std::int64_t samples_total = 0;
  std::string solver_name;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds
};

// Geometric inverse-temperature ramp for simulated annealing.
struct AnnealSchedule {
  int sweeps = 0;
  double beta_start = 0.1;
  double beta_end = 10.0;
  int restarts = 32;
  std::uint64_t seed = 0;

  // beta 0.1 -> 10, 200 V sweeps, 32 restarts.
  static AnnealSchedule defaults(int num_variables, std::uint64_t seed = 0);

  // Throws ScheduleError.
  void validate() const;
  double beta_at(int sweep) const;
};

// Neighbor lists of a QUBO in compressed form: for variable v,
// neighbors(v) yields (u, Q_uv) for every stored pair containing v.
class Adjacency {
 public:
  explicit Adjacency(const QuboModel& model);

  int num_variables() const { return static_cast<int>(linear_.size()); }
  double linear(int v) const { return linear_[static_cast<std::size_t>(v)]; }
  std::span<const int> neighbor_ids(int v) const;
  std::span<const double> neighbor_coeffs(int v) const;

 private:
  std::vector<double> linear_;
  std::vector<int> offsets_;
  std::vector<int> ids_;
  std::vector<double> coeffs_;
};

// Assignment with cached local fields, giving O(1) flip deltas and
// O(degree) flips.
class FlipState {
 public:
  FlipState(const Adjacency& adjacency, Assignment start);

  // Energy change from flipping v.
  double delta(int v) const {
    const auto i = static_cast<std::size_t>(v);
    return bits_[i] ? -field_[i] : field_[i];
  }
  void flip(int v);

  const Assignment& bits() const { return bits_; }
  double energy() const { return energy_; }

 private:
  const Adjacency* adjacency_;
  Assignment bits_;
  std::vector<double> field_;  // linear[v] + sum_u Q_uv q_u
  double energy_ = 0.0;
};

inline constexpr int kExhaustiveCap = 24;

// Gray-code enumeration of all 2^V assignments.
SolveResult solve_exhaustive(const QuboModel& model, int max_variables = kExhaustiveCap);

// Independent single-flip Metropolis chains, merged by minimum energy.
// threads <= 0 uses the hardware concurrency; results do not depend on it.
SolveResult solve_anneal(const QuboModel& model, const AnnealSchedule& schedule, int threads = 0);

// Steepest-descent single-bit flips; each pass applies the best improving flip.
SolveResult solve_bitflip(const QuboModel& model, Assignment start, int max_passes);

// Two energies count as equal within 1e-9 max(1, |a|, |b|).
bool energies_equal(double a, double b);

}  // namespace ctqubo
