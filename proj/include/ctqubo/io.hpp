#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ctqubo/image.hpp"
#include "ctqubo/ising.hpp"
#include "ctqubo/preprocess.hpp"
#include "ctqubo/projector.hpp"
#include "ctqubo/qubo.hpp"
#include "ctqubo/recon.hpp"
#include "ctqubo/solver.hpp"

namespace ctqubo::io {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Shortest text that parses back to the same double.
std::string format_number(double value);

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);
json read_json(const fs::path& path);
// Pretty-printed with a trailing newline.
void write_json(const fs::path& path, const json& value);

// CSV: one line per row, comma-separated numbers.
std::string raster_to_csv(const Raster& raster);
Raster raster_from_csv(const std::string& text);
void write_image_csv(const fs::path& path, const ImageGrid& image);
ImageGrid read_image_csv(const fs::path& path);
Raster read_raster_csv(const fs::path& path);

// PGM P2 with maxval = max(1, 2^bit_depth - 1); values rounded and clamped.
std::string image_to_pgm(const ImageGrid& image, int bit_depth);
void write_image_pgm(const fs::path& path, const ImageGrid& image, int bit_depth);
Raster raster_from_pgm(const std::string& text);
// PGM or CSV by extension.
Raster read_raster(const fs::path& path);

// Difference raster as PGM: gray = M - d with maxval 2M, M = max(1, ceil max|d|),
// so zero maps to mid-gray and pixels where the reconstruction is higher are darker.
std::string difference_to_pgm(const Raster& difference);

// "# angles: a1,a2,..." then one line of bin values per angle.
std::string sinogram_to_csv(const Sinogram& sinogram);
// Without a geometry the image side is taken as the bin count.
Sinogram sinogram_from_csv(const std::string& text, const ProjectionGeometry* geometry = nullptr);
void write_sinogram_csv(const fs::path& path, const Sinogram& sinogram);
Sinogram read_sinogram_csv(const fs::path& path, const ProjectionGeometry* geometry = nullptr);

json geometry_to_json(const ProjectionGeometry& geometry);
ProjectionGeometry geometry_from_json(const json& j);

json qubo_to_json(const QuboModel& model);
QuboModel qubo_from_json(const json& j);

json ising_to_json(const IsingModel& model);
IsingModel ising_from_json(const json& j);

std::string assignment_to_string(std::span<const std::uint8_t> assignment);
Assignment assignment_from_string(const std::string& text);

// wall_time is deliberately absent so the file is reproducible.
json solution_to_json(const SolveResult& result);
SolveResult solution_from_json(const json& j);

json report_to_json(const ReconReport& report);

// Directory with manifest.json {"angles": [...], "air_region": [r0, r1, c0, c1],
// "frames": [file, ...]}. Without "frames", every .csv/.pgm file is loaded in
// name order.
RawProjectionSet read_projection_set(const fs::path& directory);

}  // namespace ctqubo::io
