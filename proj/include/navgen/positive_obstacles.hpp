#pragma once

#include "navgen/geometry.hpp"
#include "navgen/grid.hpp"
#include "navgen/types.hpp"

namespace navgen {

struct ObstacleConfig {
  double o_obs = 0.7;  // higher than the ground threshold
  double alpha_obs = 15.0 * M_PI / 180.0;
  double normal_radius = 0.3;
  double z_th = 1.2;                // overhead clearance
  double z_band = 0.3;              // ground band for the dual filter
  double fallback_radius = 0.5;     // nearest-elevation search for empty cells
  double cluster_tolerance = 0.2;
  std::size_t min_cluster_size = 10;
};

enum class HeightFilterMode {
  discard_above,           // drop points higher than z_avg + z_th
  discard_non_ground_band  // keep only |z - z_avg| <= z_band
};

/// Points whose PCA normal exists and whose slope exceeds alpha_obs.
PointCloud candidate_obstacle_points(const PointCloud& centroids,
                                     const KdTree3& index,
                                     const ObstacleConfig& cfg);

/// Height filter against the ground elevation reference. Points over cells
/// with no elevation fall back to the nearest non-empty cell within
/// fallback_radius; with no fallback they are kept in discard_above mode
/// and dropped in band mode.
PointCloud height_filter(const PointCloud& points, const ElevationMap& elevation,
                         const ObstacleConfig& cfg, HeightFilterMode mode);

/// Clusters the candidates (noise rejection), down-projects the survivors
/// as not-traversable and ORs the trajectory footprint back in.
/// Layer polarity: true = free of positive obstacles.
BinaryLayer build_positive_layer(const PointCloud& candidates,
                                 const BinaryLayer& traj_layer,
                                 const GridSpec& spec,
                                 const ObstacleConfig& cfg);

}  // namespace navgen
