#pragma once

#include "navgen/geometry.hpp"
#include "navgen/grid.hpp"
#include "navgen/types.hpp"

namespace navgen {

struct GroundConfig {
  double o_ground = 0.5;             // occupancy threshold for ground voxels
  double alpha_ground = 30.0 * M_PI / 180.0;
  double normal_radius = 0.3;
  double cluster_tolerance = 0.2;
  double d_xy_ground = 0.5;          // trajectory intersection tolerances
  double d_z_ground = 0.7;
  int closure_radius = 2;
};

/// Points of the centroid cloud whose PCA normal exists and whose slope is
/// at most alpha_ground. Slopes are returned alongside the points.
struct GroundCandidates {
  PointCloud points;
  std::vector<double> slopes;
};

GroundCandidates candidate_ground_points(const PointCloud& centroids,
                                         const KdTree3& index,
                                         const GroundConfig& cfg);

/// Euclidean-clusters the candidates and keeps every cluster with at least
/// one point within (d_xy, d_z) of a trajectory pose. Throws NoGroundFound
/// when no cluster intersects the trajectory.
PointCloud select_connected_clusters(const PointCloud& candidates,
                                     const Trajectory& trajectory,
                                     const GroundConfig& cfg);

/// Down-projects ground points, ORs in the trajectory footprint and applies
/// the morphological closure.
BinaryLayer build_explored_layer(const PointCloud& ground,
                                 const BinaryLayer& traj_layer,
                                 const GridSpec& spec, const GroundConfig& cfg);

/// Per-cell height statistics of the ground points (population variance).
ElevationMap build_elevation_map(const PointCloud& ground, const GridSpec& spec);

}  // namespace navgen
