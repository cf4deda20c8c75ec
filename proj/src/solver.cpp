#include "ctqubo/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "ctqubo/errors.hpp"

namespace ctqubo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 chain_rng(std::uint64_t seed, int chain) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chain)};
  return std::mt19937_64(seq);
}

struct ChainResult {
  Assignment bits;
  double energy = 0.0;
};

ChainResult run_chain(const QuboModel& model, const Adjacency& adjacency,
                      const AnnealSchedule& schedule, int chain) {
  const int n = adjacency.num_variables();
  auto rng = chain_rng(schedule.seed, chain);
  Assignment start(static_cast<std::size_t>(n));
  for (auto& b : start) b = static_cast<std::uint8_t>(rng() >> 63);

  FlipState state(adjacency, std::move(start));
  ChainResult best{state.bits(), state.energy()};
  for (int sweep = 0; sweep < schedule.sweeps; ++sweep) {
    const double beta = schedule.beta_at(sweep);
    for (int v = 0; v < n; ++v) {
      const double d = state.delta(v);
      if (d <= 0.0 || unit_uniform(rng) < std::exp(-beta * d)) state.flip(v);
    }
    if (state.energy() < best.energy) {
      best.energy = state.energy();
      best.bits = state.bits();
    }
  }

  const double tracked = state.energy();
  const double full = qubo_energy(model, state.bits());
  if (!energies_equal(tracked, full))
    throw Error("internal", "incremental energy drifted: tracked " + std::to_string(tracked) +
                                ", recomputed " + std::to_string(full));
  best.energy = qubo_energy(model, best.bits);
  return best;
}

}  // namespace

bool energies_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

AnnealSchedule AnnealSchedule::defaults(int num_variables, std::uint64_t seed) {
  AnnealSchedule s;
  s.sweeps = 200 * std::max(1, num_variables);
  s.beta_start = 0.1;
  s.beta_end = 10.0;
  s.restarts = 32;
  s.seed = seed;
  return s;
}

void AnnealSchedule::validate() const {
  if (sweeps < 0) throw ScheduleError("sweeps must be non-negative");
  if (restarts < 1) throw ScheduleError("restarts must be at least 1");
  if (!std::isfinite(beta_start) || beta_start <= 0.0)
    throw ScheduleError("beta_start must be positive");
  if (!std::isfinite(beta_end) || beta_end < beta_start)
    throw ScheduleError("beta_end must be finite and >= beta_start");
}

double AnnealSchedule::beta_at(int sweep) const {
  if (sweeps <= 1) return beta_start;
  const double t = static_cast<double>(sweep) / (sweeps - 1);
  return beta_start * std::pow(beta_end / beta_start, t);
}

Adjacency::Adjacency(const QuboModel& model)
    : linear_(static_cast<std::size_t>(model.num_variables()), 0.0),
      offsets_(static_cast<std::size_t>(model.num_variables()) + 1, 0) {
  for (const auto& t : model.linear()) linear_[static_cast<std::size_t>(t.var)] = t.coeff;
  for (const auto& t : model.quadratic()) {
    ++offsets_[static_cast<std::size_t>(t.u) + 1];
    ++offsets_[static_cast<std::size_t>(t.v) + 1];
  }
  for (std::size_t k = 1; k < offsets_.size(); ++k) offsets_[k] += offsets_[k - 1];
  ids_.resize(static_cast<std::size_t>(offsets_.back()));
  coeffs_.resize(ids_.size());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& t : model.quadratic()) {
    auto& fu = fill[static_cast<std::size_t>(t.u)];
    ids_[static_cast<std::size_t>(fu)] = t.v;
    coeffs_[static_cast<std::size_t>(fu++)] = t.coeff;
    auto& fv = fill[static_cast<std::size_t>(t.v)];
    ids_[static_cast<std::size_t>(fv)] = t.u;
    coeffs_[static_cast<std::size_t>(fv++)] = t.coeff;
  }
}

std::span<const int> Adjacency::neighbor_ids(int v) const {
  const auto b = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
  const auto e = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
  return std::span<const int>(ids_).subspan(b, e - b);
}

std::span<const double> Adjacency::neighbor_coeffs(int v) const {
  const auto b = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
  const auto e = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
  return std::span<const double>(coeffs_).subspan(b, e - b);
}

FlipState::FlipState(const Adjacency& adjacency, Assignment start)
    : adjacency_(&adjacency), bits_(std::move(start)) {
  const int n = adjacency.num_variables();
  if (bits_.size() != static_cast<std::size_t>(n))
    throw ShapeError("start state has " + std::to_string(bits_.size()) + " entries, model has " +
                     std::to_string(n) + " variables");
  field_.assign(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    double f = adjacency.linear(v);
    const auto ids = adjacency.neighbor_ids(v);
    const auto coeffs = adjacency.neighbor_coeffs(v);
    for (std::size_t k = 0; k < ids.size(); ++k)
      if (bits_[static_cast<std::size_t>(ids[k])]) f += coeffs[k];
    field_[static_cast<std::size_t>(v)] = f;
  }
  // sum_v q_v field_v counts every active pair twice and every linear term once
  double twice = 0.0;
  for (int v = 0; v < n; ++v)
    if (bits_[static_cast<std::size_t>(v)])
      twice += adjacency.linear(v) + field_[static_cast<std::size_t>(v)];
  energy_ = twice / 2.0;
}

void FlipState::flip(int v) {
  const auto i = static_cast<std::size_t>(v);
  energy_ += delta(v);
  const double direction = bits_[i] ? -1.0 : 1.0;
  bits_[i] ^= 1;
  const auto ids = adjacency_->neighbor_ids(v);
  const auto coeffs = adjacency_->neighbor_coeffs(v);
  for (std::size_t k = 0; k < ids.size(); ++k)
    field_[static_cast<std::size_t>(ids[k])] += direction * coeffs[k];
}

SolveResult solve_exhaustive(const QuboModel& model, int max_variables) {
  const auto start_time = Clock::now();
  const int n = model.num_variables();
  if (n > max_variables)
    throw TooLarge("exhaustive solver is capped at " + std::to_string(max_variables) +
                   " variables, model has " + std::to_string(n));

  const Adjacency adjacency(model);
  FlipState state(adjacency, Assignment(static_cast<std::size_t>(n), 0));
  Assignment best = state.bits();
  double best_energy = state.energy();
  std::int64_t occurrences = 1;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    state.flip(std::countr_zero(k));
    const double e = state.energy();
    if (energies_equal(e, best_energy)) {
      ++occurrences;
    } else if (e < best_energy) {
      best_energy = e;
      best = state.bits();
      occurrences = 1;
    }
  }

  SolveResult result;
  result.best_energy = qubo_energy(model, best);
  result.best_assignment = std::move(best);
  result.occurrences = occurrences;
  result.samples_total = static_cast<std::int64_t>(total);
  result.solver_name = "exhaustive";
  result.wall_time = seconds_since(start_time);
  return result;
}

SolveResult solve_anneal(const QuboModel& model, const AnnealSchedule& schedule, int threads) {
  schedule.validate();
  if (model.num_variables() < 1) throw ShapeError("annealing needs at least one variable");
  const auto start_time = Clock::now();
  const Adjacency adjacency(model);

  std::vector<ChainResult> chains(static_cast<std::size_t>(schedule.restarts));
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, schedule.restarts);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (int c = next++; c < schedule.restarts && !failed; c = next++) {
      try {
        chains[static_cast<std::size_t>(c)] = run_chain(model, adjacency, schedule, c);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t best = 0;
  for (std::size_t c = 1; c < chains.size(); ++c)
    if (chains[c].energy < chains[best].energy && !energies_equal(chains[c].energy, chains[best].energy))
      best = c;
  SolveResult result;
  result.best_energy = chains[best].energy;
  result.best_assignment = chains[best].bits;
  result.occurrences = std::count_if(chains.begin(), chains.end(), [&](const ChainResult& c) {
    return energies_equal(c.energy, result.best_energy);
  });
  result.samples_total = schedule.restarts;
  result.solver_name = "anneal";
  result.seed = schedule.seed;
  result.wall_time = seconds_since(start_time);
  return result;
}

SolveResult solve_bitflip(const QuboModel& model, Assignment start, int max_passes) {
  const auto start_time = Clock::now();
  if (max_passes < 0) throw InvalidValue("max_passes must be non-negative");
  const Adjacency adjacency(model);
  FlipState state(adjacency, std::move(start));
  const int n = model.num_variables();
  for (int pass = 0; pass < max_passes; ++pass) {
    int best_var = -1;
    double best_delta = 0.0;
    for (int v = 0; v < n; ++v) {
      const double d = state.delta(v);
      if (d < best_delta) {
        best_delta = d;
        best_var = v;
      }
    }
    // rounding-level improvements would never terminate
    if (best_var < 0 || best_delta > -1e-12 * std::max(1.0, std::abs(state.energy()))) break;
    state.flip(best_var);
  }

  SolveResult result;
  result.best_assignment = state.bits();
  result.best_energy = qubo_energy(model, result.best_assignment);
  result.occurrences = 1;
  result.samples_total = 1;
  result.solver_name = "bitflip";
  result.wall_time = seconds_since(start_time);
  return result;
}

}  // namespace ctqubo
