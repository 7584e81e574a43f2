#pragma once

#include <utility>
#include <vector>

#include "navgen/grid.hpp"

namespace navgen {

/// Offsets (di, dj) of a disc structuring element: di^2 + dj^2 <= r^2.
std::vector<std::pair<int, int>> disc_offsets(int radius);

/// Dilation of the true-set by a disc of the given radius (cells).
BinaryLayer dilate(const BinaryLayer& layer, int radius);

/// Erosion of the true-set by a disc; cells outside the grid count as false,
/// so true regions touching the border shrink.
BinaryLayer erode(const BinaryLayer& layer, int radius);

/// Morphological closure (dilation then erosion with the same disc).
/// Computed on a grid padded by the radius, which makes the result equal to
/// the closure on the unbounded plane restricted to the grid: extensive
/// (never removes true cells) and idempotent. Radius 0 is the identity.
BinaryLayer morph_close(const BinaryLayer& layer, int radius);

}  // namespace navgen
