#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "navgen/grid.hpp"

namespace navgen {

/// Binary layers are 8-bit binary PGM (P5), 255 = true, 0 = false; row k of
/// the image is grid row j = k. Scalar grids are CSV with a NaN sentinel for
/// empty cells. Both carry a sidecar `<name>.meta` (same basename, .meta
/// extension) with keys: resolution, origin_x, origin_y, width, height,
/// layer, semantics.

void write_binary_map(const BinaryLayer& layer, const std::filesystem::path& path,
                      const std::string& layer_name,
                      const std::string& semantics = "true=traversable");
BinaryLayer read_binary_map(const std::filesystem::path& path);

/// One scalar value per cell; empty cells round-trip as NaN.
struct ScalarGrid {
  GridSpec spec;
  std::vector<std::optional<double>> cells;

  ScalarGrid() = default;
  explicit ScalarGrid(const GridSpec& s) : spec(s), cells(s.cell_count()) {}
};

void write_scalar_grid(const ScalarGrid& grid, const std::filesystem::path& path,
                       const std::string& layer_name,
                       const std::string& semantics);
ScalarGrid read_scalar_grid(const std::filesystem::path& path);

/// Elevation maps serialize as four scalar grids: <stem>.avg.csv, .min.csv,
/// .max.csv and .var.csv next to the given path.
void write_elevation_map(const ElevationMap& map,
                         const std::filesystem::path& stem);
ElevationMap read_elevation_map(const std::filesystem::path& stem);

ScalarGrid index_map_to_grid(const IndexMap& map);

}  // namespace navgen
