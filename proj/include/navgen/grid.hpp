#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "navgen/errors.hpp"

namespace navgen {

/// Fixed-resolution 2D grid geometry. The origin is the world position of
/// the (0,0) cell corner; cell (i,j) covers the half-open square
/// [origin_x + i*res, origin_x + (i+1)*res) x [origin_y + j*res, ...).
struct GridSpec {
  double resolution = 0.1;
  double origin_x = 0.0;
  double origin_y = 0.0;
  int width = 0;   // cells along x (index i)
  int height = 0;  // cells along y (index j)

  bool operator==(const GridSpec& o) const {
    return resolution == o.resolution && origin_x == o.origin_x &&
           origin_y == o.origin_y && width == o.width && height == o.height;
  }

  std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * width + i;
  }
  bool contains(int i, int j) const {
    return i >= 0 && i < width && j >= 0 && j < height;
  }
  double center_x(int i) const { return origin_x + (i + 0.5) * resolution; }
  double center_y(int j) const { return origin_y + (j + 0.5) * resolution; }
};

/// World (x, y) -> cell index, empty when outside the grid extent.
std::optional<std::pair<int, int>> world_to_cell(const GridSpec& spec,
                                                 double x, double y);

/// Binary navigability layer; true = traversable / explored.
struct BinaryLayer {
  GridSpec spec;
  std::vector<uint8_t> cells;

  BinaryLayer() = default;
  explicit BinaryLayer(const GridSpec& s, bool fill = false)
      : spec(s), cells(s.cell_count(), fill ? 1 : 0) {}

  bool at(int i, int j) const { return cells[spec.index(i, j)] != 0; }
  void set(int i, int j, bool v) { cells[spec.index(i, j)] = v ? 1 : 0; }
  std::size_t count_true() const;
};

/// Per-cell ground height statistics; cells without samples are empty.
struct ElevationCell {
  double avg = 0.0;
  double min = 0.0;
  double max = 0.0;
  double var = 0.0;  // population variance
};

struct ElevationMap {
  GridSpec spec;
  std::vector<std::optional<ElevationCell>> cells;

  ElevationMap() = default;
  explicit ElevationMap(const GridSpec& s) : spec(s), cells(s.cell_count()) {}

  const std::optional<ElevationCell>& at(int i, int j) const {
    return cells[spec.index(i, j)];
  }
};

/// Per-cell sorted elevation lists with a measured/synthesized flag.
struct MultiElevationMap {
  GridSpec spec;
  std::vector<std::vector<double>> values;
  std::vector<uint8_t> synthesized;

  MultiElevationMap() = default;
  explicit MultiElevationMap(const GridSpec& s)
      : spec(s), values(s.cell_count()), synthesized(s.cell_count(), 0) {}
};

/// Per-cell running sum and count of traversability indices.
struct IndexMap {
  GridSpec spec;
  std::vector<double> sum;
  std::vector<int> count;

  IndexMap() = default;
  explicit IndexMap(const GridSpec& s)
      : spec(s), sum(s.cell_count(), 0.0), count(s.cell_count(), 0) {}

  void add(int i, int j, double t) {
    sum[spec.index(i, j)] += t;
    count[spec.index(i, j)] += 1;
  }
  std::optional<double> average(int i, int j) const {
    std::size_t k = spec.index(i, j);
    if (count[k] == 0) return std::nullopt;
    return sum[k] / count[k];
  }
};

/// Cell-wise AND over a non-empty list of layers sharing one GridSpec.
BinaryLayer layer_and(const std::vector<BinaryLayer>& layers);
/// Cell-wise OR of two layers sharing one GridSpec.
BinaryLayer layer_or(const BinaryLayer& a, const BinaryLayer& b);

}  // namespace navgen
