#include "navgen/negative_obstacles.hpp"

#include <algorithm>
#include <cmath>

#include "navgen/geometry.hpp"
#include "navgen/morphology.hpp"

namespace navgen {

MultiElevationMap expand_multi_elevation(const MultiElevationMap& mem,
                                         int n_expansions) {
  if (n_expansions < 1) throw ConfigError("n_expansions must be at least 1");
  const GridSpec& spec = mem.spec;
  MultiElevationMap cur = mem;
  for (int it = 0; it < n_expansions; ++it) {
    MultiElevationMap next = cur;  // snapshot semantics
    for (int j = 0; j < spec.height; ++j) {
      for (int i = 0; i < spec.width; ++i) {
        const std::size_t k = spec.index(i, j);
        if (!cur.values[k].empty()) continue;
        double best = std::numeric_limits<double>::infinity();
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            int ni = i + di, nj = j + dj;
            if (!spec.contains(ni, nj)) continue;
            const auto& vals = cur.values[spec.index(ni, nj)];
            if (!vals.empty()) best = std::min(best, vals.front());
          }
        }
        if (std::isfinite(best)) {
          next.values[k].push_back(best);
          next.synthesized[k] = 1;
        }
      }
    }
    cur = std::move(next);
  }
  // Synthesized cells hold exactly one value (their minimum) by
  // construction; lists stay sorted since only single values are added.
  return cur;
}

BinaryLayer detect_negative(const MultiElevationMap& mem_expanded,
                            const ElevationMap& elevation,
                            const BinaryLayer& trav_pre_closure,
                            const BinaryLayer& traj_layer, const GridSpec& spec,
                            const NegativeConfig& cfg) {
  if (!(mem_expanded.spec == spec) || !(trav_pre_closure.spec == spec) ||
      !(traj_layer.spec == spec) || !(elevation.spec == spec)) {
    throw GridSpecMismatch("negative-obstacle inputs must share one grid");
  }
  cfg.validate();

  PointCloud cloud;
  cloud.frame = Frame::world;
  for (int j = 0; j < spec.height; ++j) {
    for (int i = 0; i < spec.width; ++i) {
      const auto& vals = mem_expanded.values[spec.index(i, j)];
      for (double z : vals) {
        cloud.points.emplace_back(spec.center_x(i), spec.center_y(j), z);
      }
    }
  }

  const KdTree3 index = build_index3(cloud);
  PointCloud steep = candidate_obstacle_points(cloud, index, cfg.obstacle);
  steep = height_filter(steep, elevation, cfg.obstacle,
                        HeightFilterMode::discard_above);

  BinaryLayer layer(spec, true);
  const auto clusters = euclidean_cluster(steep, cfg.obstacle.cluster_tolerance,
                                          cfg.obstacle.min_cluster_size);
  for (const auto& cluster : clusters) {
    bool touches_untraversable = false;
    for (int idx : cluster) {
      const auto& p = steep.points[idx];
      auto cell = world_to_cell(spec, p.x(), p.y());
      if (cell && !trav_pre_closure.at(cell->first, cell->second)) {
        touches_untraversable = true;
        break;
      }
    }
    if (!touches_untraversable) continue;
    for (int idx : cluster) {
      const auto& p = steep.points[idx];
      if (auto cell = world_to_cell(spec, p.x(), p.y())) {
        layer.set(cell->first, cell->second, false);
      }
    }
  }
  layer = layer_or(layer, traj_layer);
  return morph_close(layer, cfg.closure_radius);
}

}  // namespace navgen
