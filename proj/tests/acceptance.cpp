// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "ctqubo/cli.hpp"
#include "ctqubo/io.hpp"
#include "ctqubo/ising.hpp"
#include "ctqubo/phantom.hpp"
#include "ctqubo/preprocess.hpp"
#include "ctqubo/projector.hpp"
#include "ctqubo/qubo.hpp"
#include "ctqubo/recon.hpp"
#include "ctqubo/solver.hpp"
#include "oracle.hpp"
#include "scratch_dir.hpp"

using namespace ctqubo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit_s,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(elapsed < time_limit_s,
              "took " + std::to_string(elapsed) + " s, limit " + std::to_string(time_limit_s));
  if (!out.pass) ++failures;
  std::printf("[%s] AC%d %s (%.2f s)%s%s\n", out.pass ? "PASS" : "FAIL", id, name.c_str(), elapsed,
              out.detail.empty() ? "" : " -- ", out.detail.c_str());
  std::fflush(stdout);
}

bool at_minus_offset(double energy, double offset) {
  return std::abs(energy + offset) <= 1e-9 * std::max(1.0, offset);
}

QuboModel paper_model() {
  const auto proj = build_projector(ProjectionGeometry::make(2, {0, 90}));
  return build_qubo(proj, forward_project(proj, oracle::sample_2x2()), 2);
}

// Anneals the phantom's QUBO and checks for the exact image at -offset.
void phantom_reconstruction(Outcome& out, const ImageGrid& phantom, int num_angles, int bits,
                            AnnealSchedule schedule, bool refine) {
  const int n = phantom.rows();
  const auto proj = build_projector(ProjectionGeometry::make(n, uniform_angles(num_angles)));
  const auto sino = forward_project(proj, phantom);
  const auto model = build_qubo(proj, sino, bits);
  const BitEncoding enc(n, bits);
  out.require(model.num_variables() == n * n * bits, "unexpected variable count");

  auto result = solve_anneal(model, schedule);
  if (refine) {
    const auto refined = solve_bitflip(model, result.best_assignment, 100000);
    out.require(refined.best_energy <= result.best_energy, "bit-flip refinement increased energy");
    result.best_assignment = refined.best_assignment;
    result.best_energy = refined.best_energy;
  }
  const auto report = compare(reconstruct(result, enc), phantom, result.best_energy, -model.offset());
  out.require(at_minus_offset(result.best_energy, model.offset()),
              "best energy " + std::to_string(result.best_energy) + " vs -offset " +
                  std::to_string(-model.offset()));
  out.require(result.occurrences >= 1, "no restart reached the best energy");
  out.require(report.mismatched_pixels == 0,
              std::to_string(report.mismatched_pixels) + " mismatched pixels");
  out.detail += (out.detail.empty() ? "" : "; ") + std::to_string(num_angles) + " angles: E=" +
                io::format_number(result.best_energy) + ", -offset=" +
                io::format_number(-model.offset()) + ", hits " +
                std::to_string(result.occurrences) + "/" + std::to_string(result.samples_total) +
                ", mismatch " + std::to_string(report.mismatched_pixels);
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ctqubo");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

int main() {
  criterion(1, "golden 2x2 QUBO and exhaustive ground state", 1.0, [](Outcome& out) {
    const auto model = paper_model();
    out.require(model.to_dense_upper() == oracle::paper_qubo_matrix(), "QUBO matrix differs");
    out.require(model.offset() == 46.0, "offset != 46");
    const auto r = solve_exhaustive(model);
    out.require(r.best_energy == -46.0, "ground energy != -46");
    out.require(r.occurrences == 1, "optimum not unique");
    out.require(r.best_assignment == oracle::paper_ground_state(), "optimum differs");
    out.require(reconstruct(r, BitEncoding(2, 2)) == oracle::sample_2x2(), "decoded image differs");
  });

  criterion(2, "golden Ising conversion and energy identity", 1.0, [](Outcome& out) {
    const auto qubo = paper_model();
    const auto ising = to_ising(qubo);
    std::vector<double> dense(64, 0.0);
    for (const auto& t : ising.field) dense[static_cast<std::size_t>(t.var) * 9] = t.coeff;
    for (const auto& t : ising.coupling) dense[static_cast<std::size_t>(t.u) * 8 + t.v] = t.coeff;
    out.require(dense == oracle::paper_ising_matrix(), "Ising matrix differs");
    for (std::uint64_t k = 0; k < 256; ++k) {
      const auto q = oracle::assignment_from_index(k, 8);
      const double lhs = qubo_energy(qubo, q);
      const double rhs = ising_energy(ising, spins_from_bits(q)) + ising.conversion_offset;
      if (std::abs(lhs - rhs) > 1e-9) {
        out.require(false, "identity fails at state " + std::to_string(k));
        break;
      }
    }
  });

  criterion(3, "QUBO energy equals projected residual on 100+ random instances", 60.0,
            [](Outcome& out) {
              std::mt19937_64 rng(2024);
              int instances = 0;
              for (; instances < 120; ++instances) {
                const int n = 2 + static_cast<int>(rng() % 3);
                const int bits = 1 + static_cast<int>(rng() % 2);
                const int num_angles = 2 + static_cast<int>(rng() % 3);
                std::uniform_real_distribution<double> angle(0.0, 180.0);
                std::vector<double> angles;
                for (int a = 0; a < num_angles; ++a) angles.push_back(angle(rng));
                std::sort(angles.begin(), angles.end());
                const auto g = ProjectionGeometry::make(n, angles, covering_bin_count(n));
                const auto proj = build_projector(g);
                const auto target = forward_project(proj, make_random_image(n, bits, rng()));
                const BitEncoding enc(n, bits);
                const auto model = build_qubo(proj, target, bits);
                const double tol = 1e-9 * std::max(1.0, model.offset());
                const int v = enc.num_variables();
                const bool exhaustive = v <= 16;
                const std::uint64_t samples = exhaustive ? (std::uint64_t{1} << v) : 1000;
                for (std::uint64_t k = 0; k < samples; ++k) {
                  const auto q = exhaustive ? oracle::assignment_from_index(k, v)
                                            : oracle::random_assignment(rng, v);
                  if (std::abs(qubo_energy(model, q) - oracle::residual_energy(proj, target, enc, q)) >
                      tol) {
                    out.require(false, "mismatch in instance " + std::to_string(instances));
                    return;
                  }
                }
              }
              out.detail = std::to_string(instances) + " instances";
            });

  criterion(4, "16x16 binary phantom reconstructs exactly with 16 and 10 angles", 240.0,
            [](Outcome& out) {
              const auto phantom = make_shepp_logan(16, PhantomMode::binary());
              for (int angles : {16, 10}) {
                const auto start = std::chrono::steady_clock::now();
                phantom_reconstruction(out, phantom, angles, 1, AnnealSchedule::defaults(256, 1),
                                       false);
                const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                out.require(t < 120.0, "run with " + std::to_string(angles) + " angles exceeded 2 min");
              }
            });

  criterion(5, "8x8 four-level phantom reconstructs exactly with 2 bits", 300.0, [](Outcome& out) {
    const auto phantom = make_shepp_logan(8, PhantomMode::quantized(4));
    auto schedule = AnnealSchedule::defaults(128, 1);
    schedule.restarts = 64;
    phantom_reconstruction(out, phantom, 12, 2, schedule, true);
  });

  criterion(6, "projector mass conservation and axis-aligned exactness", 60.0, [](Outcome& out) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> angle(0.0, 180.0);
    const int n = 8;
    std::vector<double> angles;
    for (int a = 0; a < 8; ++a) angles.push_back(angle(rng));
    std::sort(angles.begin(), angles.end());
    const auto proj = build_projector(ProjectionGeometry::make(n, angles, covering_bin_count(n)));
    const auto axis = build_projector(ProjectionGeometry::make(n, {0, 90}));
    for (int trial = 0; trial < 20; ++trial) {
      const auto img = make_random_image(n, 6, rng());
      double mass = 0.0;
      for (double v : img.values()) mass += v;
      const auto sino = forward_project(proj, img);
      for (int a = 0; a < sino.num_angles(); ++a) {
        double total = 0.0;
        for (double v : sino.angle_row(a)) total += v;
        if (std::abs(total - mass) > 1e-6 * std::max(1.0, mass))
          out.require(false, "mass not conserved at angle " + std::to_string(angles[a]));
      }
      const auto axis_sino = forward_project(axis, img);
      for (int s = 0; s < n; ++s) {
        double col = 0.0, row = 0.0;
        for (int k = 0; k < n; ++k) {
          col += img(k, s);
          row += img(s, k);
        }
        if (axis_sino(0, s) != col || axis_sino(1, s) != row)
          out.require(false, "axis-aligned sums not exact");
      }
    }
  });

  criterion(7, "calibration round trip from synthetic intensities", 10.0, [](Outcome& out) {
    const int n = 8;
    const auto img = make_random_image(n, 2, 77);
    // scale to attenuation-like line integrals
    std::vector<double> mu(img.values().begin(), img.values().end());
    for (auto& v : mu) v *= 0.05;
    const ImageGrid attenuation(n, n, mu);
    const auto g = ProjectionGeometry::make(n, uniform_angles(8), covering_bin_count(n));
    const auto sino = forward_project(build_projector(g), attenuation);

    const double i0 = 1000.0;
    const double background = 12.5;
    RawProjectionSet raw;
    raw.angles = g.angles;
    // rows 0-1: collimated border seeing only the background; rows 2-4: beam
    raw.air_region = {0, 2, 0, g.n_bins};
    for (int a = 0; a < g.num_angles(); ++a) {
      Raster frame(5, g.n_bins, background);
      for (int r = 2; r < 5; ++r)
        for (int b = 0; b < g.n_bins; ++b) frame(r, b) = background + i0 * std::exp(-sino(a, b));
      raw.frames.push_back(frame);
    }
    const auto calibrated = beer_lambert_correct(subtract_air_background(raw), i0);
    const auto extracted = frames_to_sinogram(calibrated, 3, n);
    out.require(extracted.sinogram.geometry() == g, "geometry differs");
    double worst = 0.0;
    for (std::size_t k = 0; k < sino.values().size(); ++k) {
      const double expected = sino.values()[k];
      worst = std::max(worst, std::abs(extracted.sinogram.values()[k] - expected) /
                                  std::max(1.0, std::abs(expected)));
    }
    out.require(worst <= 1e-6, "relative error " + std::to_string(worst));
    out.detail = "max relative error " + io::format_number(worst);
  });

  criterion(8, "pipeline artifacts are byte-identical across runs", 120.0, [](Outcome& out) {
    ScratchDir dir("acceptance_determinism");
    const fs::path configs = CTQUBO_CONFIG_DIR;
    io::write_json(dir / "p16.json", {{"phantom", {{"n", 16}, {"mode", "binary"}}},
                                      {"geometry", {{"dtheta", 11.25}}},
                                      {"bits_per_pixel", 1},
                                      {"solver", {{"name", "anneal"}, {"sweeps", 2000}, {"restarts", 4}}},
                                      {"seed", 2024}});
    for (const auto& config : {configs / "demo_2x2.json", dir / "p16.json"}) {
      const auto a = dir / (config.stem().string() + "_a");
      const auto b = dir / (config.stem().string() + "_b");
      out.require(run_cli({"pipeline", "--config", config.string(), "--out-dir", a.string()}) == 0,
                  "first run failed");
      out.require(run_cli({"pipeline", "--config", config.string(), "--out-dir", b.string()}) == 0,
                  "second run failed");
      int compared = 0;
      for (const auto& e : fs::directory_iterator(a)) {
        const auto name = e.path().filename();
        if (!fs::exists(b / name) || io::read_text(a / name) != io::read_text(b / name))
          out.require(false, config.stem().string() + "/" + name.string() + " differs");
        ++compared;
      }
      out.require(compared >= 9, "missing artifacts");
    }
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
