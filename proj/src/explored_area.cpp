#include "navgen/explored_area.hpp"

#include <cmath>

#include "navgen/morphology.hpp"

namespace navgen {

GroundCandidates candidate_ground_points(const PointCloud& centroids,
                                         const KdTree3& index,
                                         const GroundConfig& cfg) {
  GroundCandidates out;
  out.points.frame = centroids.frame;
  for (const auto& p : centroids.points) {
    auto n = pca_normal(p, index, cfg.normal_radius);
    if (!n) continue;
    double alpha = slope_angle(*n);
    if (alpha <= cfg.alpha_ground) {
      out.points.points.push_back(p);
      out.slopes.push_back(alpha);
    }
  }
  return out;
}

PointCloud select_connected_clusters(const PointCloud& candidates,
                                     const Trajectory& trajectory,
                                     const GroundConfig& cfg) {
  const auto clusters = euclidean_cluster(candidates, cfg.cluster_tolerance, 1);
  PointCloud ground;
  ground.frame = candidates.frame;
  bool any = false;
  for (const auto& cluster : clusters) {
    bool intersects = false;
    for (int idx : cluster) {
      const auto& p = candidates.points[idx];
      for (const auto& pose : trajectory.poses) {
        const double dxy = std::hypot(p.x() - pose.translation.x(),
                                      p.y() - pose.translation.y());
        const double dz = std::abs(p.z() - pose.translation.z());
        if (dxy <= cfg.d_xy_ground && dz <= cfg.d_z_ground) {
          intersects = true;
          break;
        }
      }
      if (intersects) break;
    }
    if (!intersects) continue;
    any = true;
    for (int idx : cluster) ground.points.push_back(candidates.points[idx]);
  }
  if (!any) throw NoGroundFound("no candidate ground cluster intersects the trajectory");
  return ground;
}

BinaryLayer build_explored_layer(const PointCloud& ground,
                                 const BinaryLayer& traj_layer,
                                 const GridSpec& spec, const GroundConfig& cfg) {
  BinaryLayer layer(spec, false);
  for (const auto& p : ground.points) {
    if (auto cell = world_to_cell(spec, p.x(), p.y())) {
      layer.set(cell->first, cell->second, true);
    }
  }
  layer = layer_or(layer, traj_layer);
  return morph_close(layer, cfg.closure_radius);
}

ElevationMap build_elevation_map(const PointCloud& ground, const GridSpec& spec) {
  std::vector<double> sum(spec.cell_count(), 0.0);
  std::vector<double> sum_sq(spec.cell_count(), 0.0);
  std::vector<double> mn(spec.cell_count(), std::numeric_limits<double>::infinity());
  std::vector<double> mx(spec.cell_count(), -std::numeric_limits<double>::infinity());
  std::vector<int> cnt(spec.cell_count(), 0);
  for (const auto& p : ground.points) {
    auto cell = world_to_cell(spec, p.x(), p.y());
    if (!cell) continue;
    std::size_t k = spec.index(cell->first, cell->second);
    sum[k] += p.z();
    sum_sq[k] += p.z() * p.z();
    mn[k] = std::min(mn[k], p.z());
    mx[k] = std::max(mx[k], p.z());
    cnt[k] += 1;
  }
  ElevationMap map(spec);
  for (std::size_t k = 0; k < map.cells.size(); ++k) {
    if (cnt[k] == 0) continue;
    ElevationCell c;
    const double n = cnt[k];
    c.avg = sum[k] / n;
    c.min = mn[k];
    c.max = mx[k];
    c.var = std::max(0.0, sum_sq[k] / n - c.avg * c.avg);
    map.cells[k] = c;
  }
  return map;
}

}  // namespace navgen
