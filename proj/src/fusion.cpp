#include "navgen/fusion.hpp"

#include <cmath>

namespace navgen {

BinaryLayer trajectory_footprint_layer(const Trajectory& trajectory,
                                       double footprint_radius,
                                       const GridSpec& spec) {
  BinaryLayer layer(spec, false);
  const int reach =
      static_cast<int>(std::ceil(footprint_radius / spec.resolution)) + 1;
  const double r2 = footprint_radius * footprint_radius;
  for (const auto& pose : trajectory.poses) {
    const double px = pose.translation.x();
    const double py = pose.translation.y();
    const int ci = static_cast<int>(std::floor((px - spec.origin_x) / spec.resolution));
    const int cj = static_cast<int>(std::floor((py - spec.origin_y) / spec.resolution));
    for (int dj = -reach; dj <= reach; ++dj) {
      for (int di = -reach; di <= reach; ++di) {
        int i = ci + di, j = cj + dj;
        if (!spec.contains(i, j)) continue;
        const double dx = spec.center_x(i) - px;
        const double dy = spec.center_y(j) - py;
        if (dx * dx + dy * dy <= r2) layer.set(i, j, true);
      }
    }
  }
  return layer;
}

BinaryLayer fuse(const BinaryLayer& pos, const BinaryLayer& neg,
                 const BinaryLayer& trav, const BinaryLayer& expl,
                 const BinaryLayer& traj_layer) {
  return layer_or(layer_and({pos, neg, trav, expl}), traj_layer);
}

}  // namespace navgen
