#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "navgen/grid.hpp"
#include "navgen/types.hpp"

namespace navgen {

using VoxelKey = std::array<int, 3>;

/// Voxel indices traversed by the segment origin -> end (3D DDA), excluding
/// the voxel containing the endpoint. Exposed for oracle testing.
std::vector<VoxelKey> traverse_ray(const Point3& origin, const Point3& end,
                                   double voxel_size);

struct OccupancyParams {
  double voxel_size = 0.1;
  double p_hit = 0.7;
  double p_miss = 0.4;
  double clamp_min_prob = 0.12;
  double clamp_max_prob = 0.97;
  double max_ray_length = 20.0;  // free-space carving only; hits always land
};

/// Clamped log-odds 3D occupancy grid stored in a fixed-depth octree.
/// integrate_scan must be called in recording order (clamping makes the
/// update order-sensitive); reads are safe between integrations.
class OccupancyOctree {
 public:
  explicit OccupancyOctree(const OccupancyParams& params = {});
  ~OccupancyOctree();
  OccupancyOctree(OccupancyOctree&&) noexcept;
  OccupancyOctree& operator=(OccupancyOctree&&) noexcept;

  const OccupancyParams& params() const { return params_; }

  /// Inverse sensor model over one scan: every traversed voxel gets the miss
  /// update, each endpoint voxel the hit update; within the scan a voxel is
  /// updated once and a hit wins over a miss. Rays longer than
  /// max_ray_length carve free space only up to that length. Points that
  /// coincide with the origin are skipped and counted.
  void integrate_scan(const Point3& sensor_origin, const PointCloud& world_cloud);

  VoxelKey key_of(const Point3& p) const;
  Point3 center_of(const VoxelKey& k) const;

  /// Log-odds of a voxel; 0 (unknown prior) when never touched.
  double log_odds(const VoxelKey& k) const;
  double probability(const VoxelKey& k) const;

  /// Centers of all voxels with occupancy probability > threshold, in
  /// lexicographic voxel-index order.
  PointCloud occupied_centroids(double threshold) const;

  /// Project occupied voxel centers into per-cell sorted elevation lists.
  /// Voxels outside the grid extent are dropped and counted.
  MultiElevationMap to_multi_elevation(const GridSpec& spec,
                                       double threshold) const;

  std::size_t degenerate_rays() const { return degenerate_rays_; }
  std::size_t dropped_voxels() const { return dropped_voxels_; }
  std::size_t voxel_count() const;

 private:
  struct Node;
  float* find(const VoxelKey& k) const;
  float& touch(const VoxelKey& k);
  void apply_update(const VoxelKey& k, double delta);
  void collect(const Node* node, int depth, VoxelKey base,
               std::vector<std::pair<VoxelKey, float>>& out) const;

  OccupancyParams params_;
  double log_hit_ = 0.0;
  double log_miss_ = 0.0;
  double clamp_min_ = 0.0;
  double clamp_max_ = 0.0;
  std::unique_ptr<Node> root_;
  std::size_t degenerate_rays_ = 0;
  mutable std::size_t dropped_voxels_ = 0;
};

}  // namespace navgen
