#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "navgen/grid.hpp"

namespace navgen {

struct PixelMetrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;  // traversable = positive class
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

PixelMetrics pixel_metrics(const BinaryLayer& pred, const BinaryLayer& truth);

/// Largest grid covered by both specs. Requires equal resolutions and
/// origins on a common lattice (throws GridSpecMismatch otherwise, or when
/// the overlap is empty).
GridSpec intersect_specs(const GridSpec& a, const GridSpec& b);

/// Extracts the sub-window of `layer` described by `target`, which must lie
/// inside the layer's spec on the same lattice.
BinaryLayer crop(const BinaryLayer& layer, const GridSpec& target);

/// Robot-footprint inflation: erosion of the true-set by a disc of the given
/// metric radius (a cell stays true iff every cell the disc reaches is true;
/// cells outside the grid count as blocked). A corridor exactly two radii
/// wide is fully eroded.
BinaryLayer inflate(const BinaryLayer& layer, double robot_radius);

struct Cell {
  int i = 0;
  int j = 0;
  bool operator==(const Cell&) const = default;
};

/// Exact shortest 8-connected path length in meters (straight moves cost
/// one resolution, diagonals sqrt(2) times that), octile heuristic,
/// deterministic lexicographic tie-breaking. Empty when the goal is not
/// traversable or unreachable. Throws InvalidStart when the start cell is
/// not traversable on this layer.
std::optional<double> astar(const BinaryLayer& layer, Cell start, Cell goal);

enum class TupleOutcome : uint8_t {
  matched_success,
  matched_failure,
  mismatch_goal,         // disagreement explained by goal-cell classification
  mismatch_connectivity  // disagreement with the goal classified alike
};

struct TupleRecord {
  Cell start;
  Cell goal;
  bool truth_success = false;
  bool pred_success = false;
  TupleOutcome outcome = TupleOutcome::matched_failure;
  double overlength = 0.0;  // pred - truth, matched successes only
};

struct ValidationReport {
  PixelMetrics pixels;  // on the uninflated maps
  std::size_t n = 0;
  std::size_t truth_successes = 0;
  std::size_t matched_successes = 0;
  std::size_t truth_failures = 0;
  std::size_t matched_failures = 0;
  std::size_t goal_misclassified = 0;
  std::size_t connectivity_mismatches = 0;
  double success_agreement = 0.0;
  double failure_agreement = 0.0;
  double mean_overlength = 0.0;
  double max_overlength = 0.0;
  std::vector<std::size_t> overlength_hist;  // fixed-width bins
  double hist_bin_width = 0.1;               // meters
  std::vector<TupleRecord> tuples;
};

/// Monte Carlo planning-agreement protocol: inflate both maps, draw n
/// start-goal tuples with a seeded generator (start uniform over the
/// inflated truth free space, goal uniform over the whole grid), plan on
/// both maps and classify each tuple. Throws EmptyFreeSpace when the truth
/// map has no free cell after inflation.
ValidationReport monte_carlo(const BinaryLayer& pred, const BinaryLayer& truth,
                             std::size_t n, uint64_t seed, double robot_radius);

/// Report files: plain-text metrics table, per-tuple CSV and the
/// overlength histogram CSV (bin, count).
void write_report(const ValidationReport& report,
                  const std::filesystem::path& out_dir);

}  // namespace navgen
