#pragma once

#include "navgen/grid.hpp"
#include "navgen/types.hpp"

namespace navgen {

/// Cell true iff its center lies within the footprint disc of some pose
/// (xy distance only).
BinaryLayer trajectory_footprint_layer(const Trajectory& trajectory,
                                       double footprint_radius,
                                       const GridSpec& spec);

/// Final map: (pos AND neg AND trav AND expl) OR trajectory footprint.
BinaryLayer fuse(const BinaryLayer& pos, const BinaryLayer& neg,
                 const BinaryLayer& trav, const BinaryLayer& expl,
                 const BinaryLayer& traj_layer);

}  // namespace navgen
