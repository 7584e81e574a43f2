#pragma once

#include "navgen/grid.hpp"
#include "navgen/positive_obstacles.hpp"
#include "navgen/types.hpp"

namespace navgen {

struct TraversabilityConfig {
  double gamma = 0.75;
  double t_min = 200.0;
  double r_2d = 0.3;              // same-ring 2D neighbor radius
  double z_band = 0.3;            // ground band for the dual height filter
  double fallback_radius = 0.5;
  double footprint_radius = 0.3;  // per-pose index averaging disc
  int closure_radius = 2;
};

/// Per-point roughness indices of a single scan: xy position and
/// t = lambda_max / lambda_min of the same-ring 2D PCA.
struct TaggedCloud {
  std::vector<Eigen::Vector2d> xy;
  std::vector<double> index;
};

/// Height-filters a world-frame, ring-tagged scan to the ground band,
/// projects it to z = 0 and computes the eigenvalue-ratio index per point
/// over same-ring neighbors. Points without a valid eigen-pair are omitted.
TaggedCloud scan_roughness(const PointCloud& world_scan,
                           const ElevationMap& elevation,
                           const TraversabilityConfig& cfg);

/// Arithmetic mean of all point indices per cell, across all scans.
IndexMap aggregate_index(const std::vector<TaggedCloud>& tagged,
                         const GridSpec& spec);

/// Per-pose mean of non-empty cell averages inside the footprint disc.
/// Poses with no covered samples inherit the previous pose's value (the
/// first pose takes the next valid one). Throws NoCoverage when no pose
/// covers any sample.
std::vector<double> trajectory_indices(const IndexMap& index_map,
                                       const Trajectory& trajectory,
                                       double footprint_radius);

/// Eq-style dynamic threshold: a non-empty cell is traversable iff
/// t >= gamma * t_T(closest pose in xy) and t >= t_min. Empty cells are
/// not-traversable here (the explored layer governs unknowns). ORs the
/// trajectory footprint and closes. When pre_closure is non-null it
/// receives the layer before the closure (used by the negative-obstacle
/// intersection filter).
BinaryLayer threshold_traversability(const IndexMap& index_map,
                                     const Trajectory& trajectory,
                                     const std::vector<double>& traj_indices,
                                     const TraversabilityConfig& cfg,
                                     const BinaryLayer& traj_layer,
                                     BinaryLayer* pre_closure = nullptr);

}  // namespace navgen
