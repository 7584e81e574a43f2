#pragma once

#include <filesystem>
#include <ostream>

#include "navgen/config.hpp"
#include "navgen/dataset_io.hpp"
#include "navgen/grid.hpp"

namespace navgen {

/// Everything build_map produces, kept in memory so callers (CLI, tests,
/// bindings) can inspect intermediate layers.
struct MapBundle {
  GridSpec spec;
  BinaryLayer traj_footprint;
  BinaryLayer explored;
  BinaryLayer positive;     // true = free of positive obstacles
  BinaryLayer traversable;  // true = traversable terrain
  BinaryLayer negative;     // true = free of negative obstacles
  BinaryLayer fused;
  ElevationMap elevation;
  IndexMap trav_index;

  struct Counts {
    std::size_t scans = 0;
    std::size_t points = 0;
    std::size_t occupied_voxels = 0;
    std::size_t degenerate_rays = 0;
    std::size_t ground_points = 0;
    std::size_t explored_cells = 0;
    std::size_t positive_blocked_cells = 0;
    std::size_t not_traversable_cells = 0;
    std::size_t negative_blocked_cells = 0;
    std::size_t fused_traversable_cells = 0;
  } counts;
};

/// Full offline pipeline: occupancy integration, explored area + elevation,
/// positive obstacles, traversability, negative obstacles, fusion. Stage
/// timings go to `log` (may be null); they are deliberately kept out of the
/// returned data so artifacts stay reproducible.
MapBundle build_map(const Dataset& dataset, const PipelineConfig& config,
                    std::ostream* log = nullptr);

/// Writes the six map artifacts plus manifest.txt (config echo and counts)
/// under out_dir.
void write_map_outputs(const MapBundle& bundle, const PipelineConfig& config,
                       const std::filesystem::path& out_dir);

}  // namespace navgen
