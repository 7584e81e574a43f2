#pragma once

#include "navgen/grid.hpp"
#include "navgen/positive_obstacles.hpp"
#include "navgen/types.hpp"

namespace navgen {

struct NegativeConfig {
  int n_expansions = 5;
  int closure_radius = 2;
  ObstacleConfig obstacle;  // parameters for the re-detection pass

  void validate() const {
    if (n_expansions < 1) {
      throw ConfigError("n_expansions must be at least 1");
    }
  }
};

/// Recursive min-neighbor expansion of the multi-elevation map into empty
/// cells. Each iteration reads only the previous iteration's state; a filled
/// cell copies the minimum elevation among its 8-neighbors' minima and is
/// flagged synthesized (one value per synthesized cell). Measured cells are
/// never modified.
MultiElevationMap expand_multi_elevation(const MultiElevationMap& mem,
                                         int n_expansions);

/// Converts the expanded map to a point cloud (cell-center xy, one point per
/// stored elevation), re-runs the positive-obstacle chain on it and keeps
/// only clusters whose projection touches a not-traversable cell of the
/// pre-closure traversability layer. ORs the trajectory footprint, closes.
BinaryLayer detect_negative(const MultiElevationMap& mem_expanded,
                            const ElevationMap& elevation,
                            const BinaryLayer& trav_pre_closure,
                            const BinaryLayer& traj_layer, const GridSpec& spec,
                            const NegativeConfig& cfg);

}  // namespace navgen
