#include "ctqubo/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ctqubo/errors.hpp"
#include "ctqubo/io.hpp"
#include "ctqubo/ising.hpp"
#include "ctqubo/phantom.hpp"
#include "ctqubo/preprocess.hpp"
#include "ctqubo/projector.hpp"
#include "ctqubo/qubo.hpp"
#include "ctqubo/recon.hpp"
#include "ctqubo/solver.hpp"

namespace ctqubo::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string format = "pgm";

  fs::path out(const std::string& name) const { return fs::path(out_dir) / name; }
  bool write_pgm() const { return format == "pgm"; }
};

int bit_depth_for(double max_value) {
  int bits = 1;
  while (bits < 52 && std::ldexp(1.0, bits) - 1.0 < max_value) ++bits;
  return bits;
}

void write_image(const GlobalOptions& g, const std::string& stem, const ImageGrid& image,
                 int bit_depth) {
  io::write_image_csv(g.out(stem + ".csv"), image);
  if (g.write_pgm()) io::write_image_pgm(g.out(stem + ".pgm"), image, bit_depth);
}

void write_difference(const GlobalOptions& g, const Raster& diff) {
  io::write_text(g.out("difference.csv"), io::raster_to_csv(diff));
  if (g.write_pgm()) io::write_text(g.out("difference.pgm"), io::difference_to_pgm(diff));
}

std::vector<double> parse_angle_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
    } catch (const std::exception&) {
      throw InvalidGeometry("cannot parse angle '" + token + "'");
    }
  }
  return out;
}

// Exactly one of an explicit list, a step, or a count.
std::vector<double> resolve_angles(const std::vector<double>& list, std::optional<double> step,
                                   std::optional<int> count) {
  const int given = !list.empty() + step.has_value() + count.has_value();
  if (given != 1) throw InvalidGeometry("give exactly one of angles, dtheta, num_angles");
  if (!list.empty()) return list;
  if (step) return angles_from_step(*step);
  return uniform_angles(*count);
}

PhantomMode phantom_mode(const std::string& mode, int levels) {
  if (mode == "binary") return PhantomMode::binary();
  if (mode == "quantized") return PhantomMode::quantized(levels);
  throw InvalidValue("unknown phantom mode '" + mode + "'");
}

void print_summary(std::ostream& os, const ReconReport& report, const SolveResult& solution) {
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-24s %-14s %-10s %s\n", "expected_lowest_energy",
                "achieved_energy", "relative_error", "mismatch", "occurrences");
  os << line;
  std::snprintf(line, sizeof line, "%-24.12g %-24.12g %-14.3g %-10d %lld/%lld\n",
                report.energy_expected, report.energy_achieved, report.energy_relative_error,
                report.mismatched_pixels, static_cast<long long>(solution.occurrences),
                static_cast<long long>(solution.samples_total));
  os << line;
}

struct SolverOptions {
  std::string name = "anneal";
  int sweeps = 0;  // 0 = 200 V
  int restarts = 32;
  double beta_start = 0.1;
  double beta_end = 10.0;
  int max_passes = 100000;
  int cap = kExhaustiveCap;
  bool refine = false;
};

SolveResult run_solver(const QuboModel& model, const SolverOptions& opts, std::uint64_t seed,
                       const Assignment* start) {
  if (opts.name == "exhaustive") {
    auto r = solve_exhaustive(model, opts.cap);
    r.seed = seed;
    return r;
  }
  if (opts.name == "bitflip") {
    Assignment s(static_cast<std::size_t>(model.num_variables()), 0);
    if (start) s = *start;
    auto r = solve_bitflip(model, std::move(s), opts.max_passes);
    r.seed = seed;
    return r;
  }
  if (opts.name == "anneal") {
    AnnealSchedule schedule = AnnealSchedule::defaults(model.num_variables(), seed);
    if (opts.sweeps > 0) schedule.sweeps = opts.sweeps;
    schedule.restarts = opts.restarts;
    schedule.beta_start = opts.beta_start;
    schedule.beta_end = opts.beta_end;
    auto r = solve_anneal(model, schedule);
    if (opts.refine) {
      auto refined = solve_bitflip(model, r.best_assignment, opts.max_passes);
      if (refined.best_energy < r.best_energy && !energies_equal(refined.best_energy, r.best_energy)) {
        r.best_assignment = refined.best_assignment;
        r.best_energy = refined.best_energy;
        r.occurrences = 1;
        r.solver_name = "anneal+bitflip";
      }
    }
    return r;
  }
  throw InvalidValue("unknown solver '" + opts.name + "'");
}

json solver_options_to_json(const SolverOptions& o, int num_variables) {
  return {{"name", o.name},
          {"sweeps", o.sweeps > 0 ? o.sweeps : 200 * std::max(1, num_variables)},
          {"restarts", o.restarts},
          {"beta_start", o.beta_start},
          {"beta_end", o.beta_end},
          {"max_passes", o.max_passes},
          {"cap", o.cap},
          {"refine", o.refine}};
}

SolverOptions solver_options_from_json(const json& j) {
  SolverOptions o;
  o.name = j.value("name", o.name);
  o.sweeps = j.value("sweeps", o.sweeps);
  o.restarts = j.value("restarts", o.restarts);
  o.beta_start = j.value("beta_start", o.beta_start);
  o.beta_end = j.value("beta_end", o.beta_end);
  o.max_passes = j.value("max_passes", o.max_passes);
  o.cap = j.value("cap", o.cap);
  o.refine = j.value("refine", o.refine);
  return o;
}

// Runs the whole chain from a config file; every stage boundary lands on disk.
void cmd_pipeline(const GlobalOptions& g, const fs::path& config_path, std::ostream& os) {
  const json config = io::read_json(config_path);
  json run;
  const std::uint64_t seed = g.seed ? *g.seed : config.value("seed", std::uint64_t{0});

  ImageGrid image;
  int display_bits = 1;
  try {
    if (config.contains("image")) {
      const std::string rel = config.at("image").get<std::string>();
      image = io::read_image_csv(config_path.parent_path() / rel);
      run["image"] = rel;
      display_bits = bit_depth_for(image.max_value());
    } else {
      const json& p = config.at("phantom");
      const int n = p.at("n").get<int>();
      const std::string mode = p.value("mode", "binary");
      const int levels = p.value("levels", 2);
      image = make_shepp_logan(n, phantom_mode(mode, levels));
      run["phantom"] = {{"n", n}, {"mode", mode}, {"levels", mode == "binary" ? 2 : levels}};
      display_bits = mode == "binary" ? 1 : bit_depth_for(levels - 1);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("pipeline config: ") + e.what());
  }
  if (image.rows() != image.cols()) throw ShapeError("pipeline image must be square");
  const int n = image.rows();

  const json geo = config.value("geometry", json::object());
  std::optional<double> step;
  std::optional<int> count;
  std::vector<double> list;
  if (geo.contains("angles")) list = geo.at("angles").get<std::vector<double>>();
  if (geo.contains("dtheta")) step = geo.at("dtheta").get<double>();
  if (geo.contains("num_angles")) count = geo.at("num_angles").get<int>();
  const auto geometry = ProjectionGeometry::make(n, resolve_angles(list, step, count),
                                                 geo.value("n_bins", 0), geo.value("bin_width", 1.0));
  const int bits = config.value("bits_per_pixel", 1);
  const BitEncoding encoding(n, bits);
  encode(encoding, image);  // rejects images the encoding cannot represent

  const auto solver_opts = solver_options_from_json(config.value("solver", json::object()));
  run["geometry"] = io::geometry_to_json(geometry);
  run["bits_per_pixel"] = bits;
  run["solver"] = solver_options_to_json(solver_opts, encoding.num_variables());
  run["seed"] = seed;
  run["format"] = g.format;
  SinogramMask mask;
  if (config.contains("mask")) {
    const std::string rel = config.at("mask").get<std::string>();
    mask = mask_from_raster(io::read_raster(config_path.parent_path() / rel), geometry);
    run["mask"] = rel;
  }
  fs::create_directories(g.out_dir);
  io::write_json(g.out("run.json"), run);

  write_image(g, "reference", image, display_bits);
  const auto projector = build_projector(geometry);
  const auto sinogram = forward_project(projector, image);
  io::write_json(g.out("geometry.json"), io::geometry_to_json(geometry));
  io::write_sinogram_csv(g.out("sinogram.csv"), sinogram);

  const auto qubo = build_qubo(projector, sinogram, bits, mask);
  io::write_json(g.out("qubo.json"), io::qubo_to_json(qubo));
  io::write_json(g.out("ising.json"), io::ising_to_json(to_ising(qubo)));

  const auto solution = run_solver(qubo, solver_opts, seed, nullptr);
  io::write_json(g.out("solution.json"), io::solution_to_json(solution));

  const auto reconstructed = reconstruct(solution, encoding);
  write_image(g, "reconstructed", reconstructed, display_bits);
  const auto report = compare(reconstructed, image, solution.best_energy, -qubo.offset());
  io::write_json(g.out("report.json"), io::report_to_json(report));
  write_difference(g, difference_image(reconstructed, image));

  print_summary(os, report, solution);
}

void write_error(const GlobalOptions& g, const Error& e) {
  const json err = {{"error", e.kind()}, {"message", e.what()}};
  std::cerr << err.dump() << "\n";
  try {
    io::write_json(g.out("error.json"), err);
  } catch (const std::exception&) {
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"QUBO/Ising CT reconstruction toolkit", "ctqubo"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--format", g.format, "csv: CSV only; pgm: CSV plus PGM previews")
      ->check(CLI::IsMember({"csv", "pgm"}))
      ->capture_default_str();

  // phantom
  auto* phantom = app.add_subcommand("phantom", "Generate a Shepp-Logan or random test image");
  int ph_n = 0;
  std::string ph_mode = "binary";
  int ph_levels = 2;
  int ph_bits = 1;
  std::string ph_name = "phantom";
  phantom->add_option("--n", ph_n, "Image side length")->required();
  phantom->add_option("--mode", ph_mode, "binary | quantized | random")
      ->check(CLI::IsMember({"binary", "quantized", "random"}));
  phantom->add_option("--levels", ph_levels, "Gray levels for quantized mode (power of two)");
  phantom->add_option("--bits", ph_bits, "Bit depth for random mode");
  phantom->add_option("--name", ph_name, "Output file stem");

  // project
  auto* project = app.add_subcommand("project", "Forward-project an image into a sinogram");
  std::string pr_image;
  std::string pr_angles;
  std::optional<double> pr_step;
  std::optional<int> pr_count;
  int pr_bins = 0;
  double pr_width = 1.0;
  project->add_option("--image", pr_image, "Image CSV")->required();
  project->add_option("--angles", pr_angles, "Comma-separated angles in degrees");
  project->add_option("--dtheta", pr_step, "Angle step; expands to 0, step, ..., < 180");
  project->add_option("--num-angles", pr_count, "Number of uniform angles in [0, 180)");
  project->add_option("--bins", pr_bins, "Detector bins (default: image side)");
  project->add_option("--bin-width", pr_width, "Bin width in pixels");

  // build-qubo
  auto* build = app.add_subcommand("build-qubo", "Build the reconstruction QUBO");
  std::string bq_geometry;
  std::string bq_sinogram;
  std::string bq_mask;
  int bq_bits = 1;
  build->add_option("--geometry", bq_geometry, "Geometry JSON")->required();
  build->add_option("--sinogram", bq_sinogram, "Sinogram CSV")->required();
  build->add_option("--bits", bq_bits, "Bits per pixel")->required();
  build->add_option("--mask", bq_mask, "Angle x bin raster; nonzero entries are dropped");

  // to-ising
  auto* ising = app.add_subcommand("to-ising", "Convert a QUBO JSON to Ising JSON");
  std::string ti_qubo;
  ising->add_option("--qubo", ti_qubo, "QUBO JSON")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Minimize a QUBO");
  std::string so_qubo;
  std::string so_start;
  SolverOptions so;
  solve->add_option("--qubo", so_qubo, "QUBO JSON")->required();
  solve->add_option("--solver", so.name, "exhaustive | anneal | bitflip")
      ->check(CLI::IsMember({"exhaustive", "anneal", "bitflip"}));
  solve->add_option("--sweeps", so.sweeps, "Sweeps per restart (default 200 V)");
  solve->add_option("--restarts", so.restarts, "Independent annealing chains");
  solve->add_option("--beta-start", so.beta_start, "Initial inverse temperature");
  solve->add_option("--beta-end", so.beta_end, "Final inverse temperature");
  solve->add_option("--max-passes", so.max_passes, "Bit-flip descent steps");
  solve->add_option("--cap", so.cap, "Exhaustive variable cap");
  solve->add_flag("--refine", so.refine, "Bit-flip refinement after annealing");
  solve->add_option("--start", so_start, "Solution JSON used as the bit-flip start");

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct", "Decode a solution into an image");
  std::string re_solution;
  int re_n = 0;
  int re_bits = 1;
  recon->add_option("--solution", re_solution, "Solution JSON")->required();
  recon->add_option("--n", re_n, "Image side length")->required();
  recon->add_option("--bits", re_bits, "Bits per pixel")->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "Compare a reconstruction with a reference image");
  std::string cm_image;
  std::string cm_reference;
  std::string cm_solution;
  std::string cm_qubo;
  std::optional<double> cm_achieved;
  std::optional<double> cm_expected;
  cmp->add_option("--image", cm_image, "Reconstructed image CSV")->required();
  cmp->add_option("--reference", cm_reference, "Reference image CSV")->required();
  cmp->add_option("--solution", cm_solution, "Solution JSON supplying the achieved energy");
  cmp->add_option("--qubo", cm_qubo, "QUBO JSON supplying the expected energy (-offset)");
  cmp->add_option("--energy-achieved", cm_achieved, "Achieved energy");
  cmp->add_option("--energy-expected", cm_expected, "Expected lowest energy");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Turn raw projection frames into a sinogram");
  std::string ca_dir;
  double ca_reference = 0.0;
  int ca_level = 0;
  int ca_size = 0;
  double ca_width = 1.0;
  cal->add_option("--frames-dir", ca_dir, "Directory with manifest.json and frames")->required();
  cal->add_option("--reference-intensity", ca_reference, "Unattenuated beam intensity")->required();
  cal->add_option("--level", ca_level, "Axial level (frame row)");
  cal->add_option("--image-size", ca_size, "Image side (default: bin count)");
  cal->add_option("--bin-width", ca_width, "Bin width in pixels");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run phantom -> reconstruction end to end");
  std::string pi_config;
  pipeline->add_option("--config", pi_config, "Pipeline config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*phantom) {
      ImageGrid image;
      int bits = 1;
      if (ph_mode == "random") {
        image = make_random_image(ph_n, ph_bits, g.seed.value_or(0));
        bits = ph_bits;
      } else {
        image = make_shepp_logan(ph_n, phantom_mode(ph_mode, ph_levels));
        bits = ph_mode == "binary" ? 1 : bit_depth_for(ph_levels - 1);
      }
      write_image(g, ph_name, image, bits);
      std::cout << g.out(ph_name + ".csv").string() << "\n";
    } else if (*project) {
      const auto image = io::read_image_csv(pr_image);
      if (image.rows() != image.cols()) throw ShapeError("image must be square");
      const auto geometry = ProjectionGeometry::make(
          image.rows(),
          resolve_angles(pr_angles.empty() ? std::vector<double>{} : parse_angle_list(pr_angles),
                         pr_step, pr_count),
          pr_bins, pr_width);
      const auto sinogram = forward_project(build_projector(geometry), image);
      io::write_json(g.out("geometry.json"), io::geometry_to_json(geometry));
      io::write_sinogram_csv(g.out("sinogram.csv"), sinogram);
      std::cout << g.out("sinogram.csv").string() << "\n";
    } else if (*build) {
      const auto geometry = io::geometry_from_json(io::read_json(bq_geometry));
      const auto sinogram = io::read_sinogram_csv(bq_sinogram, &geometry);
      SinogramMask mask;
      if (!bq_mask.empty()) mask = mask_from_raster(io::read_raster(bq_mask), geometry);
      const auto qubo = build_qubo(build_projector(geometry), sinogram, bq_bits, mask);
      io::write_json(g.out("qubo.json"), io::qubo_to_json(qubo));
      std::cout << "variables " << qubo.num_variables() << ", linear " << qubo.linear().size()
                << ", quadratic " << qubo.quadratic().size() << ", offset "
                << io::format_number(qubo.offset()) << "\n";
    } else if (*ising) {
      const auto model = to_ising(io::qubo_from_json(io::read_json(ti_qubo)));
      io::write_json(g.out("ising.json"), io::ising_to_json(model));
      std::cout << "conversion_offset " << io::format_number(model.conversion_offset) << "\n";
    } else if (*solve) {
      const auto qubo = io::qubo_from_json(io::read_json(so_qubo));
      std::optional<Assignment> start;
      if (!so_start.empty())
        start = io::solution_from_json(io::read_json(so_start)).best_assignment;
      const auto result = run_solver(qubo, so, g.seed.value_or(0), start ? &*start : nullptr);
      io::write_json(g.out("solution.json"), io::solution_to_json(result));
      std::cout << result.solver_name << ": best_energy " << io::format_number(result.best_energy)
                << " (expected " << io::format_number(-qubo.offset()) << "), occurrences "
                << result.occurrences << "/" << result.samples_total << ", "
                << result.wall_time << " s\n";
    } else if (*recon) {
      const auto solution = io::solution_from_json(io::read_json(re_solution));
      const auto image = reconstruct(solution, BitEncoding(re_n, re_bits));
      write_image(g, "reconstructed", image, re_bits);
      std::cout << g.out("reconstructed.csv").string() << "\n";
    } else if (*cmp) {
      const auto image = io::read_image_csv(cm_image);
      const auto reference = io::read_image_csv(cm_reference);
      double achieved = cm_achieved.value_or(0.0);
      double expected = cm_expected.value_or(0.0);
      SolveResult solution;
      if (!cm_solution.empty()) {
        solution = io::solution_from_json(io::read_json(cm_solution));
        if (!cm_achieved) achieved = solution.best_energy;
      }
      if (!cm_qubo.empty() && !cm_expected)
        expected = -io::qubo_from_json(io::read_json(cm_qubo)).offset();
      const auto report = compare(image, reference, achieved, expected);
      io::write_json(g.out("report.json"), io::report_to_json(report));
      write_difference(g, difference_image(image, reference));
      print_summary(std::cout, report, solution);
    } else if (*cal) {
      auto raw = io::read_projection_set(ca_dir);
      raw = beer_lambert_correct(subtract_air_background(raw), ca_reference);
      const auto extracted = frames_to_sinogram(raw, ca_level, ca_size, ca_width);
      io::write_json(g.out("geometry.json"), io::geometry_to_json(extracted.sinogram.geometry()));
      io::write_sinogram_csv(g.out("sinogram.csv"), extracted.sinogram);
      io::write_json(g.out("calibration.json"),
                     {{"axial_level", ca_level}, {"clamped", extracted.clamped}});
      std::cout << g.out("sinogram.csv").string() << " (clamped " << extracted.clamped << ")\n";
    } else if (*pipeline) {
      cmd_pipeline(g, pi_config, std::cout);
    }
  } catch (const Error& e) {
    write_error(g, e);
    return 1;
  } catch (const std::exception& e) {
    write_error(g, Error("internal", e.what()));
    return 1;
  }
  return 0;
}

}  // namespace ctqubo::cli
