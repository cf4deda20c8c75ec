#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "ctqubo/errors.hpp"
#include "ctqubo/ising.hpp"
#include "oracle.hpp"

using namespace ctqubo;

namespace {

QuboModel sample_model() {
  const auto proj = build_projector(ProjectionGeometry::make(2, {0, 90}));
  return build_qubo(proj, forward_project(proj, oracle::sample_2x2()), 2);
}

std::vector<double> dense(const IsingModel& m) {
  const auto n = static_cast<std::size_t>(m.num_variables);
  std::vector<double> out(n * n, 0.0);
  for (const auto& t : m.field) out[static_cast<std::size_t>(t.var) * (n + 1)] = t.coeff;
  for (const auto& t : m.coupling) out[static_cast<std::size_t>(t.u) * n + t.v] = t.coeff;
  return out;
}

}  // namespace

TEST_CASE("worked example converts to the printed Ising matrix") {
  const auto ising = to_ising(sample_model());
  CHECK(dense(ising) == oracle::paper_ising_matrix());
  CHECK(ising.field_at(0) == 3.0);
  CHECK(ising.field_at(7) == -6.0);
  CHECK(ising.coupling_at(0, 1) == 2.0);
  CHECK(ising.coupling_at(2, 3) == 2.0);
  CHECK(ising.coupling_at(6, 7) == 2.0);
  CHECK(ising.conversion_offset == -26.0);
}

TEST_CASE("worked example identity over all 256 states") {
  const auto qubo = sample_model();
  const auto ising = to_ising(qubo);
  double min_ising = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < 256; ++k) {
    const auto q = oracle::assignment_from_index(k, 8);
    const double e = ising_energy(ising, spins_from_bits(q));
    CHECK(std::abs(qubo_energy(qubo, q) - (e + ising.conversion_offset)) <= 1e-9);
    min_ising = std::min(min_ising, e);
  }
  CHECK(min_ising + ising.conversion_offset == -46.0);
  CHECK(ising_energy(ising, spins_from_bits(oracle::paper_ground_state())) ==
        -46.0 - ising.conversion_offset);
}

TEST_CASE("trivial models") {
  const auto zero = to_ising(QuboModel(4, {}, {}, 0.0));
  CHECK(zero.field.empty());
  CHECK(zero.coupling.empty());
  CHECK(zero.conversion_offset == 0.0);
  CHECK(ising_energy(zero, Spins{1, -1, 1, 1}) == 0.0);

  IsingModel single{1, {{0, 2.5}}, {}, 0.0};
  CHECK(ising_energy(single, Spins{1}) == 2.5);
  CHECK(ising_energy(single, Spins{-1}) == -2.5);
}

TEST_CASE("spin validation") {
  IsingModel m{2, {}, {{0, 1, 1.0}}, 0.0};
  CHECK_THROWS_AS(ising_energy(m, Spins{1, 0}), InvalidSpin);
  CHECK_THROWS_AS(ising_energy(m, Spins{1}), ShapeError);
  CHECK_THROWS_AS(bits_from_spins(Spins{2}), InvalidSpin);
  CHECK(bits_from_spins(Spins{-1, 1}) == Assignment{0, 1});
}

TEST_CASE("random QUBO identity, exhaustive at V=10") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const auto qubo = oracle::random_qubo(rng, 10);
    const auto ising = to_ising(qubo);
    for (std::uint64_t k = 0; k < 1024; ++k) {
      const auto q = oracle::assignment_from_index(k, 10);
      REQUIRE(std::abs(qubo_energy(qubo, q) -
                       (ising_energy(ising, spins_from_bits(q)) + ising.conversion_offset)) <= 1e-9);
    }
  }
}

TEST_CASE("argmin sets coincide up to the bit map") {
  std::mt19937_64 rng(37);
  for (int n = 1; n <= 12; ++n) {
    // integer coefficients so ties are exact and argmin sets are meaningful
    std::vector<LinearTerm> lin;
    std::vector<QuadraticTerm> quad;
    for (int v = 0; v < n; ++v) lin.push_back({v, static_cast<double>(static_cast<int>(rng() % 7) - 3)});
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 2) quad.push_back({u, v, static_cast<double>(static_cast<int>(rng() % 5) - 2)});
    const QuboModel qubo(n, lin, quad, 0.0);
    const auto ising = to_ising(qubo);
    double best_q = std::numeric_limits<double>::infinity();
    double best_s = best_q;
    std::set<std::uint64_t> arg_q, arg_s;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
      const auto q = oracle::assignment_from_index(k, n);
      const double eq = qubo_energy(qubo, q);
      const double es = ising_energy(ising, spins_from_bits(q));
      if (eq < best_q) { best_q = eq; arg_q.clear(); }
      if (eq == best_q) arg_q.insert(k);
      if (es < best_s) { best_s = es; arg_s.clear(); }
      if (es == best_s) arg_s.insert(k);
    }
    CHECK(arg_q == arg_s);
  }
}

TEST_CASE("analytic inverse restores the QUBO") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto qubo = oracle::random_qubo(rng, 15, 0.5);
    const auto ising = to_ising(qubo);
    const auto back = to_qubo(ising);
    for (int v = 0; v < 15; ++v) CHECK(std::abs(back.linear_at(v) - qubo.linear_at(v)) <= 1e-12);
    for (int u = 0; u < 15; ++u)
      for (int v = u + 1; v < 15; ++v)
        CHECK(std::abs(back.quadratic_at(u, v) - qubo.quadratic_at(u, v)) <= 1e-12);
    // spin constant cancels the conversion offset
    double constant = 0.0;
    for (const auto& t : ising.coupling) constant += t.coeff;
    for (const auto& t : ising.field) constant -= t.coeff;
    CHECK(std::abs(constant + ising.conversion_offset) <= 1e-9);
  }
  const auto sample = sample_model();
  CHECK(to_qubo(to_ising(sample), sample.offset()) == sample);
}
