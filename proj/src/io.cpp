#include "ctqubo/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ctqubo/errors.hpp"

namespace ctqubo::io {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& token) {
  const std::string t = trim(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw FormatError("cannot parse number '" + t + "'");
  return value;
}

std::vector<double> parse_csv_line(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(parse_number(token));
  return out;
}

std::string join_numbers(std::span<const double> values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ',';
    out += format_number(values[k]);
  }
  return out;
}

std::string pgm_text(const Raster& raster, int maxval, auto&& map) {
  std::string out = "P2\n" + std::to_string(raster.cols) + " " + std::to_string(raster.rows) +
                    "\n" + std::to_string(maxval) + "\n";
  for (int r = 0; r < raster.rows; ++r) {
    for (int c = 0; c < raster.cols; ++c) {
      const double v = std::clamp(std::floor(map(raster(r, c)) + 0.5), 0.0,
                                  static_cast<double>(maxval));
      if (c) out += ' ';
      out += std::to_string(static_cast<long long>(v));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw FormatError("cannot format number");
  return std::string(buf, ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw FormatError("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& value) { write_text(path, value.dump(2) + "\n"); }

std::string raster_to_csv(const Raster& raster) {
  std::string out;
  for (int r = 0; r < raster.rows; ++r) {
    out += join_numbers(std::span<const double>(raster.values).subspan(
        static_cast<std::size_t>(r) * raster.cols, static_cast<std::size_t>(raster.cols)));
    out += '\n';
  }
  return out;
}

Raster raster_from_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  std::vector<double> values;
  int rows = 0;
  int cols = -1;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto row = parse_csv_line(line);
    if (cols >= 0 && static_cast<int>(row.size()) != cols)
      throw FormatError("ragged CSV: row " + std::to_string(rows) + " has " +
                        std::to_string(row.size()) + " values, expected " + std::to_string(cols));
    cols = static_cast<int>(row.size());
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) throw FormatError("CSV contains no rows");
  return Raster(rows, cols, std::move(values));
}

void write_image_csv(const fs::path& path, const ImageGrid& image) {
  write_text(path, raster_to_csv(image.to_raster()));
}

Raster read_raster_csv(const fs::path& path) { return raster_from_csv(read_text(path)); }

ImageGrid read_image_csv(const fs::path& path) {
  Raster r = read_raster_csv(path);
  return ImageGrid(r.rows, r.cols, std::move(r.values));
}

std::string image_to_pgm(const ImageGrid& image, int bit_depth) {
  const int maxval = std::max(1, (1 << std::clamp(bit_depth, 1, 16)) - 1);
  return pgm_text(image.to_raster(), maxval, [](double v) { return v; });
}

void write_image_pgm(const fs::path& path, const ImageGrid& image, int bit_depth) {
  write_text(path, image_to_pgm(image, bit_depth));
}

std::string difference_to_pgm(const Raster& difference) {
  double largest = 0.0;
  for (double v : difference.values) largest = std::max(largest, std::abs(v));
  const int half = std::max(1, static_cast<int>(std::ceil(largest)));
  return pgm_text(difference, 2 * half, [half](double d) { return half - d; });
}

Raster raster_from_pgm(const std::string& text) {
  std::stringstream cleaned;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    cleaned << (hash == std::string::npos ? line : line.substr(0, hash)) << '\n';
  }
  std::string magic;
  int cols = 0;
  int rows = 0;
  int maxval = 0;
  cleaned >> magic >> cols >> rows >> maxval;
  if (magic != "P2" || !cleaned || cols <= 0 || rows <= 0 || maxval <= 0)
    throw FormatError("not an ASCII (P2) PGM");
  std::vector<double> values(static_cast<std::size_t>(rows) * cols);
  for (auto& v : values) {
    long long x = 0;
    if (!(cleaned >> x)) throw FormatError("PGM has too few pixels");
    v = static_cast<double>(x);
  }
  return Raster(rows, cols, std::move(values));
}

Raster read_raster(const fs::path& path) {
  const std::string text = read_text(path);
  if (path.extension() == ".pgm") return raster_from_pgm(text);
  return raster_from_csv(text);
}

std::string sinogram_to_csv(const Sinogram& sinogram) {
  std::string out = "# angles: " + join_numbers(sinogram.geometry().angles) + "\n";
  for (int a = 0; a < sinogram.num_angles(); ++a) out += join_numbers(sinogram.angle_row(a)) + "\n";
  return out;
}

Sinogram sinogram_from_csv(const std::string& text, const ProjectionGeometry* geometry) {
  std::stringstream ss(text);
  std::string line;
  std::vector<double> angles;
  bool have_angles = false;
  std::vector<double> values;
  int bins = -1;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string key = "# angles:";
      if (line.rfind(key, 0) == 0) {
        angles = parse_csv_line(line.substr(key.size()));
        have_angles = true;
      }
      continue;
    }
    auto row = parse_csv_line(line);
    if (bins >= 0 && static_cast<int>(row.size()) != bins)
      throw FormatError("ragged sinogram CSV");
    bins = static_cast<int>(row.size());
    values.insert(values.end(), row.begin(), row.end());
  }
  if (!have_angles) throw FormatError("sinogram CSV lacks the '# angles:' header");
  if (bins <= 0) throw FormatError("sinogram CSV has no data rows");
  if (values.size() != angles.size() * static_cast<std::size_t>(bins))
    throw FormatError("sinogram CSV has " + std::to_string(values.size() / bins) +
                      " rows for " + std::to_string(angles.size()) + " angles");
  ProjectionGeometry g;
  if (geometry) {
    if (geometry->angles != angles || geometry->n_bins != bins)
      throw ShapeError("sinogram CSV does not match the supplied geometry");
    g = *geometry;
  } else {
    g = ProjectionGeometry::make(bins, angles, bins);
  }
  return Sinogram(std::move(g), std::move(values));
}

void write_sinogram_csv(const fs::path& path, const Sinogram& sinogram) {
  write_text(path, sinogram_to_csv(sinogram));
}

Sinogram read_sinogram_csv(const fs::path& path, const ProjectionGeometry* geometry) {
  return sinogram_from_csv(read_text(path), geometry);
}

json geometry_to_json(const ProjectionGeometry& g) {
  return {{"n", g.n}, {"angles", g.angles}, {"n_bins", g.n_bins}, {"bin_width", g.bin_width}};
}

ProjectionGeometry geometry_from_json(const json& j) {
  try {
    return ProjectionGeometry::make(j.at("n").get<int>(), j.at("angles").get<std::vector<double>>(),
                                    j.value("n_bins", 0), j.value("bin_width", 1.0));
  } catch (const json::exception& e) {
    throw FormatError(std::string("geometry JSON: ") + e.what());
  }
}

json qubo_to_json(const QuboModel& model) {
  json linear = json::array();
  for (const auto& t : model.linear()) linear.push_back({t.var, t.coeff});
  json quadratic = json::array();
  for (const auto& t : model.quadratic()) quadratic.push_back({t.u, t.v, t.coeff});
  return {{"num_variables", model.num_variables()},
          {"offset", model.offset()},
          {"linear", std::move(linear)},
          {"quadratic", std::move(quadratic)}};
}

QuboModel qubo_from_json(const json& j) {
  try {
    std::vector<LinearTerm> linear;
    for (const auto& t : j.at("linear")) linear.push_back({t.at(0).get<int>(), t.at(1).get<double>()});
    std::vector<QuadraticTerm> quadratic;
    for (const auto& t : j.at("quadratic"))
      quadratic.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>()});
    return QuboModel(j.at("num_variables").get<int>(), std::move(linear), std::move(quadratic),
                     j.value("offset", 0.0));
  } catch (const json::exception& e) {
    throw FormatError(std::string("QUBO JSON: ") + e.what());
  }
}

json ising_to_json(const IsingModel& model) {
  json field = json::array();
  for (const auto& t : model.field) field.push_back({t.var, t.coeff});
  json coupling = json::array();
  for (const auto& t : model.coupling) coupling.push_back({t.u, t.v, t.coeff});
  return {{"num_variables", model.num_variables},
          {"conversion_offset", model.conversion_offset},
          {"field", std::move(field)},
          {"coupling", std::move(coupling)}};
}

IsingModel ising_from_json(const json& j) {
  try {
    IsingModel m;
    m.num_variables = j.at("num_variables").get<int>();
    m.conversion_offset = j.value("conversion_offset", 0.0);
    for (const auto& t : j.at("field")) m.field.push_back({t.at(0).get<int>(), t.at(1).get<double>()});
    for (const auto& t : j.at("coupling"))
      m.coupling.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>()});
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("Ising JSON: ") + e.what());
  }
}

std::string assignment_to_string(std::span<const std::uint8_t> assignment) {
  std::string out(assignment.size(), '0');
  for (std::size_t k = 0; k < assignment.size(); ++k)
    if (assignment[k]) out[k] = '1';
  return out;
}

Assignment assignment_from_string(const std::string& text) {
  Assignment out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw FormatError("assignment must contain only 0 and 1");
    out.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

json solution_to_json(const SolveResult& r) {
  return {{"solver", r.solver_name},
          {"seed", r.seed},
          {"best_energy", r.best_energy},
          {"occurrences", r.occurrences},
          {"samples_total", r.samples_total},
          {"assignment", assignment_to_string(r.best_assignment)}};
}

SolveResult solution_from_json(const json& j) {
  try {
    SolveResult r;
    r.solver_name = j.at("solver").get<std::string>();
    r.seed = j.value("seed", std::uint64_t{0});
    r.best_energy = j.at("best_energy").get<double>();
    r.occurrences = j.value("occurrences", std::int64_t{1});
    r.samples_total = j.value("samples_total", std::int64_t{1});
    r.best_assignment = assignment_from_string(j.at("assignment").get<std::string>());
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("solution JSON: ") + e.what());
  }
}

json report_to_json(const ReconReport& report) {
  return {{"rows", report.reconstructed.rows()},
          {"cols", report.reconstructed.cols()},
          {"has_reference", report.reference.has_value()},
          {"mismatched_pixels", report.mismatched_pixels},
          {"max_abs_diff", report.max_abs_diff},
          {"pixel_mismatch_fraction", report.pixel_mismatch_fraction},
          {"energy_achieved", report.energy_achieved},
          {"energy_expected", report.energy_expected},
          {"energy_relative_error", report.energy_relative_error}};
}

RawProjectionSet read_projection_set(const fs::path& directory) {
  const json manifest = read_json(directory / "manifest.json");
  RawProjectionSet raw;
  try {
    raw.angles = manifest.at("angles").get<std::vector<double>>();
    const auto region = manifest.at("air_region").get<std::vector<int>>();
    if (region.size() != 4) throw FormatError("air_region must be [r0, r1, c0, c1]");
    raw.air_region = {region[0], region[1], region[2], region[3]};
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  std::vector<fs::path> files;
  if (manifest.contains("frames")) {
    for (const auto& f : manifest.at("frames")) files.push_back(directory / f.get<std::string>());
  } else {
    for (const auto& entry : fs::directory_iterator(directory)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".csv" || ext == ".pgm")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  }
  for (const auto& f : files) raw.frames.push_back(read_raster(f));
  raw.validate();
  return raw;
}

}  // namespace ctqubo::io
