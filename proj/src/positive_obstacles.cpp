#include "navgen/positive_obstacles.hpp"

#include <cmath>

namespace navgen {

PointCloud candidate_obstacle_points(const PointCloud& centroids,
                                     const KdTree3& index,
                                     const ObstacleConfig& cfg) {
  PointCloud out;
  out.frame = centroids.frame;
  for (const auto& p : centroids.points) {
    auto n = pca_normal(p, index, cfg.normal_radius);
    if (!n) continue;
    if (slope_angle(*n) > cfg.alpha_obs) out.points.push_back(p);
  }
  return out;
}

namespace {

std::optional<double> ground_reference(const ElevationMap& elevation, double x,
                                       double y, double fallback_radius) {
  const GridSpec& spec = elevation.spec;
  auto cell = world_to_cell(spec, x, y);
  if (cell && elevation.at(cell->first, cell->second)) {
    return elevation.at(cell->first, cell->second)->avg;
  }
  // Ring search over grid cells out to the fallback radius; the nearest
  // non-empty cell (by center distance) wins, ties by lower (i, j).
  const int max_r = static_cast<int>(std::ceil(fallback_radius / spec.resolution));
  int ci = cell ? cell->first
                : static_cast<int>(std::floor((x - spec.origin_x) / spec.resolution));
  int cj = cell ? cell->second
                : static_cast<int>(std::floor((y - spec.origin_y) / spec.resolution));
  double best_d2 = fallback_radius * fallback_radius;
  std::optional<double> best;
  for (int dj = -max_r; dj <= max_r; ++dj) {
    for (int di = -max_r; di <= max_r; ++di) {
      int i = ci + di, j = cj + dj;
      if (!spec.contains(i, j) || !elevation.at(i, j)) continue;
      double dx = spec.center_x(i) - x;
      double dy = spec.center_y(j) - y;
      double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = elevation.at(i, j)->avg;
      }
    }
  }
  return best;
}

}  // namespace

PointCloud height_filter(const PointCloud& points, const ElevationMap& elevation,
                         const ObstacleConfig& cfg, HeightFilterMode mode) {
  PointCloud out;
  out.frame = points.frame;
  const bool tagged = points.has_rings();
  for (std::size_t k = 0; k < points.points.size(); ++k) {
    const auto& p = points.points[k];
    auto z_ground = ground_reference(elevation, p.x(), p.y(), cfg.fallback_radius);
    bool keep;
    if (mode == HeightFilterMode::discard_above) {
      keep = !z_ground || (p.z() - *z_ground <= cfg.z_th);
    } else {
      keep = z_ground && (std::abs(p.z() - *z_ground) <= cfg.z_band);
    }
    if (keep) {
      out.points.push_back(p);
      if (tagged) out.rings.push_back(points.rings[k]);
    }
  }
  return out;
}

BinaryLayer build_positive_layer(const PointCloud& candidates,
                                 const BinaryLayer& traj_layer,
                                 const GridSpec& spec,
                                 const ObstacleConfig& cfg) {
  BinaryLayer layer(spec, true);
  const auto clusters =
      euclidean_cluster(candidates, cfg.cluster_tolerance, cfg.min_cluster_size);
  for (const auto& cluster : clusters) {
    for (int idx : cluster) {
      const auto& p = candidates.points[idx];
      if (auto cell = world_to_cell(spec, p.x(), p.y())) {
        layer.set(cell->first, cell->second, false);
      }
    }
  }
  return layer_or(layer, traj_layer);
}

}  // namespace navgen
