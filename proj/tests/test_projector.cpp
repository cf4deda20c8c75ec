#include <doctest.h>

#include <cmath>
#include <random>

#include "ctqubo/errors.hpp"
#include "ctqubo/phantom.hpp"
#include "ctqubo/projector.hpp"
#include "oracle.hpp"

using namespace ctqubo;

TEST_CASE("2x2 at 0 and 90 degrees sums columns then rows") {
  const auto proj = build_projector(ProjectionGeometry::make(2, {0, 90}, 2));
  // bin 0 at 0 degrees: pixels (0,0) and (1,0), full weight
  const auto row = proj.row(0, 0);
  REQUIRE(row.size() == 2);
  CHECK(row[0].pixel == 0);
  CHECK(row[0].weight == 1.0);
  CHECK(row[1].pixel == 2);
  CHECK(row[1].weight == 1.0);

  const auto sino = forward_project(proj, oracle::sample_2x2());
  CHECK(sino(0, 0) == 2.0);
  CHECK(sino(0, 1) == 4.0);
  CHECK(sino(1, 0) == 1.0);
  CHECK(sino(1, 1) == 5.0);
  CHECK(sino.sum_of_squares() == 46.0);
}

TEST_CASE("overlap areas match point sampling at 45 degrees") {
  const auto g = ProjectionGeometry::make(4, {45}, 6);
  const auto proj = build_projector(g);
  std::vector<double> area(16, 0.0);
  for (int b = 0; b < g.n_bins; ++b) {
    for (const auto& e : proj.row(0, b)) {
      CHECK(e.weight > 0.0);
      CHECK(e.weight <= 1.0);
      const double sampled = oracle::sampled_overlap(4, e.pixel / 4, e.pixel % 4, 45.0,
                                                     g.bin_lower(b), g.bin_lower(b) + 1.0);
      CHECK(std::abs(e.weight - sampled) < 2e-3);
      area[static_cast<std::size_t>(e.pixel)] += e.weight;
    }
    // bins the projector left out really have no overlap
    for (int p = 0; p < 16; ++p) {
      bool present = false;
      for (const auto& e : proj.row(0, b)) present |= e.pixel == p;
      if (!present)
        CHECK(oracle::sampled_overlap(4, p / 4, p % 4, 45.0, g.bin_lower(b),
                                      g.bin_lower(b) + 1.0, 200) < 1e-3);
    }
  }
  for (double a : area) CHECK(std::abs(a - 1.0) < 1e-9);
}

TEST_CASE("weights are positive, bounded, and indexed in range") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, 180.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const auto g = ProjectionGeometry::make(n, {angle(rng)}, covering_bin_count(n));
    const auto proj = build_projector(g);
    for (int r = 0; r < proj.num_rows(); ++r)
      for (const auto& e : proj.row(r)) {
        CHECK(e.weight >= 1e-12);
        CHECK(e.weight <= 1.0 + 1e-12);
        CHECK(e.pixel >= 0);
        CHECK(e.pixel < n * n);
      }
  }
}

TEST_CASE("forward projection basics") {
  const auto g = ProjectionGeometry::make(5, uniform_angles(7), covering_bin_count(5));
  const auto proj = build_projector(g);
  SUBCASE("zero image") {
    const auto sino = forward_project(proj, ImageGrid::zeros(5, 5));
    for (double v : sino.values()) CHECK(v == 0.0);
  }
  SUBCASE("all ones conserves area per angle") {
    const auto sino = forward_project(proj, ImageGrid(5, 5, std::vector<double>(25, 1.0)));
    for (int a = 0; a < g.num_angles(); ++a) {
      double total = 0.0;
      for (double v : sino.angle_row(a)) total += v;
      CHECK(total == doctest::Approx(25.0).epsilon(1e-12));
    }
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(forward_project(proj, ImageGrid::zeros(4, 4)), ShapeError);
  }
}

TEST_CASE("linearity on random images") {
  std::mt19937_64 rng(11);
  const auto g = ProjectionGeometry::make(6, {0, 17.5, 45, 90, 133}, covering_bin_count(6));
  const auto proj = build_projector(g);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = make_random_image(6, 4, rng());
    const auto y = make_random_image(6, 4, rng());
    const double alpha = 0.5 + static_cast<double>(rng() % 100) / 10.0;
    const double beta = static_cast<double>(rng() % 100) / 7.0;
    std::vector<double> mix(36);
    for (std::size_t k = 0; k < 36; ++k) mix[k] = alpha * x.values()[k] + beta * y.values()[k];
    const auto lhs = forward_project(proj, ImageGrid(6, 6, mix));
    const auto px = forward_project(proj, x);
    const auto py = forward_project(proj, y);
    for (std::size_t k = 0; k < lhs.values().size(); ++k) {
      const double rhs = alpha * px.values()[k] + beta * py.values()[k];
      CHECK(std::abs(lhs.values()[k] - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("0 and 90 degree rows are exact column and row sums") {
  for (int n : {2, 3, 7, 10}) {
    const auto img = make_random_image(n, 5, static_cast<std::uint64_t>(n));
    const auto sino = forward_project(build_projector(ProjectionGeometry::make(n, {0, 90})), img);
    for (int s = 0; s < n; ++s) {
      double col = 0.0, row = 0.0;
      for (int k = 0; k < n; ++k) {
        col += img(k, s);
        row += img(s, k);
      }
      CHECK(sino(0, s) == col);
      CHECK(sino(1, s) == row);
    }
    // transposing swaps the two views
    const auto t = forward_project(build_projector(ProjectionGeometry::make(n, {0, 90})),
                                   img.transposed());
    for (int s = 0; s < n; ++s) {
      CHECK(t(0, s) == sino(1, s));
      CHECK(t(1, s) == sino(0, s));
    }
  }
}

TEST_CASE("geometry validation and angle helpers") {
  CHECK_THROWS_AS(ProjectionGeometry::make(4, {}), InvalidGeometry);
  CHECK_THROWS_AS(ProjectionGeometry::make(4, {0, 180}), InvalidGeometry);
  CHECK_THROWS_AS(ProjectionGeometry::make(4, {10, 5}), InvalidGeometry);
  CHECK_THROWS_AS(ProjectionGeometry::make(4, {0}, 3, 0.0), InvalidGeometry);
  CHECK_THROWS_AS(ProjectionGeometry::make(0, {0}), InvalidGeometry);
  CHECK(ProjectionGeometry::make(4, {0}).n_bins == 4);

  CHECK(angles_from_step(45) == std::vector<double>{0, 45, 90, 135});
  CHECK(angles_from_step(11.25).size() == 16);
  CHECK(angles_from_step(11.25).back() == 168.75);
  CHECK(uniform_angles(4) == std::vector<double>{0, 45, 90, 135});
  CHECK(covering_bin_count(16) == 23);

  const auto [c, s] = cos_sin_degrees(90);
  CHECK(c == 0.0);
  CHECK(s == 1.0);
}

TEST_CASE("sinogram shape checks") {
  const auto g = ProjectionGeometry::make(3, {0, 60, 120});
  CHECK_THROWS_AS(Sinogram(g, std::vector<double>(8)), ShapeError);
  const Sinogram s(g, std::vector<double>(9, 2.0));
  CHECK(s.sum_of_squares() == 36.0);
}
