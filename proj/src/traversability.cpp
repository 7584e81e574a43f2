#include "navgen/traversability.hpp"

#include <cmath>
#include <map>

#include "navgen/geometry.hpp"
#include "navgen/morphology.hpp"

namespace navgen {

namespace {
constexpr double kLambdaFloor = 1e-12;  // m^2; keeps smooth lines finite
}

TaggedCloud scan_roughness(const PointCloud& world_scan,
                           const ElevationMap& elevation,
                           const TraversabilityConfig& cfg) {
  TaggedCloud out;
  if (!world_scan.has_rings()) return out;

  ObstacleConfig band_cfg;
  band_cfg.z_band = cfg.z_band;
  band_cfg.fallback_radius = cfg.fallback_radius;
  const PointCloud banded = height_filter(world_scan, elevation, band_cfg,
                                          HeightFilterMode::discard_non_ground_band);

  // Group the projected points per ring; the index measures deviation from
  // the ring's own line shape.
  std::map<int, std::vector<int>> by_ring;
  for (std::size_t k = 0; k < banded.points.size(); ++k) {
    by_ring[banded.rings[k]].push_back(static_cast<int>(k));
  }
  for (const auto& [ring, members] : by_ring) {
    std::vector<Eigen::Vector2d> flat;
    flat.reserve(members.size());
    for (int idx : members) {
      flat.emplace_back(banded.points[idx].x(), banded.points[idx].y());
    }
    const KdTree2 index = build_index2(flat);
    for (const auto& p : flat) {
      auto eig = pca_eigen2d(p, index, cfg.r_2d);
      if (!eig) continue;
      const double lmin = std::max(eig->second, kLambdaFloor);
      out.xy.push_back(p);
      out.index.push_back(eig->first / lmin);
    }
  }
  return out;
}

IndexMap aggregate_index(const std::vector<TaggedCloud>& tagged,
                         const GridSpec& spec) {
  IndexMap map(spec);
  for (const auto& cloud : tagged) {
    for (std::size_t k = 0; k < cloud.xy.size(); ++k) {
      if (auto cell = world_to_cell(spec, cloud.xy[k].x(), cloud.xy[k].y())) {
        map.add(cell->first, cell->second, cloud.index[k]);
      }
    }
  }
  return map;
}

std::vector<double> trajectory_indices(const IndexMap& index_map,
                                       const Trajectory& trajectory,
                                       double footprint_radius) {
  const GridSpec& spec = index_map.spec;
  const int reach = static_cast<int>(std::ceil(footprint_radius / spec.resolution)) + 1;
  std::vector<std::optional<double>> raw(trajectory.size());
  for (std::size_t n = 0; n < trajectory.size(); ++n) {
    const auto& t = trajectory.poses[n].translation;
    const int ci = static_cast<int>(std::floor((t.x() - spec.origin_x) / spec.resolution));
    const int cj = static_cast<int>(std::floor((t.y() - spec.origin_y) / spec.resolution));
    double sum = 0.0;
    int count = 0;
    for (int dj = -reach; dj <= reach; ++dj) {
      for (int di = -reach; di <= reach; ++di) {
        int i = ci + di, j = cj + dj;
        if (!spec.contains(i, j)) continue;
        double dx = spec.center_x(i) - t.x();
        double dy = spec.center_y(j) - t.y();
        if (dx * dx + dy * dy > footprint_radius * footprint_radius) continue;
        if (auto avg = index_map.average(i, j)) {
          sum += *avg;
          ++count;
        }
      }
    }
    if (count > 0) raw[n] = sum / count;
  }

  std::vector<double> out(trajectory.size(), 0.0);
  std::vector<char> filled(trajectory.size(), 0);
  std::optional<double> carry;
  for (std::size_t n = 0; n < raw.size(); ++n) {
    if (raw[n]) carry = raw[n];
    if (carry) {
      out[n] = *carry;
      filled[n] = 1;
    }
  }
  if (!carry) throw NoCoverage("no trajectory pose covers any index sample");
  // Leading poses without coverage take the next valid value.
  carry.reset();
  for (std::size_t n = raw.size(); n-- > 0;) {
    if (raw[n]) carry = raw[n];
    if (!filled[n] && carry) out[n] = *carry;
  }
  return out;
}

BinaryLayer threshold_traversability(const IndexMap& index_map,
                                     const Trajectory& trajectory,
                                     const std::vector<double>& traj_indices,
                                     const TraversabilityConfig& cfg,
                                     const BinaryLayer& traj_layer,
                                     BinaryLayer* pre_closure) {
  const GridSpec& spec = index_map.spec;
  BinaryLayer layer(spec, false);
  for (int j = 0; j < spec.height; ++j) {
    for (int i = 0; i < spec.width; ++i) {
      auto t = index_map.average(i, j);
      if (!t) continue;
      // Closest trajectory pose in xy; ties resolve to the earlier pose.
      const double cx = spec.center_x(i), cy = spec.center_y(j);
      double best_d2 = std::numeric_limits<double>::infinity();
      std::size_t best_n = 0;
      for (std::size_t n = 0; n < trajectory.size(); ++n) {
        const auto& tr = trajectory.poses[n].translation;
        double dx = tr.x() - cx, dy = tr.y() - cy;
        double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
          best_d2 = d2;
          best_n = n;
        }
      }
      const double t_T = traj_indices[best_n];
      if (*t >= cfg.gamma * t_T && *t >= cfg.t_min) layer.set(i, j, true);
    }
  }
  layer = layer_or(layer, traj_layer);
  if (pre_closure) *pre_closure = layer;
  return morph_close(layer, cfg.closure_radius);
}

}  // namespace navgen
