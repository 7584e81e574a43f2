#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "navgen/kdtree.hpp"
#include "navgen/types.hpp"

namespace navgen {

/// Spatial indexes used by the normal / roughness kernels.
/// The 3D index is built over a PointCloud; the 2D one over xy projections.
KdTree3 build_index3(const PointCloud& cloud);
KdTree2 build_index2(const std::vector<Eigen::Vector2d>& points);

struct NormalPoint {
  Point3 point;
  Eigen::Vector3d normal;  // unit length
  double slope;            // radians, in [0, pi/2]
};

/// PCA plane normal of the radius-r neighborhood of p (p itself included
/// once). Empty when fewer than 3 points are available or the neighborhood
/// is rank-deficient (collinear points). The returned vector is unit length
/// with a deterministic sign: first nonzero component positive.
std::optional<Eigen::Vector3d> pca_normal(const Point3& p, const KdTree3& index,
                                          double r);

/// Angle between the normal and vertical, folded into [0, pi/2] so that
/// n and -n give the same slope. Throws NonUnitNormal if |n| is off by
/// more than 1e-6.
double slope_angle(const Eigen::Vector3d& n);

/// 2D analogue of pca_normal: eigenvalues (lambda_max, lambda_min) of the
/// neighborhood covariance. Empty when fewer than 3 points are available.
std::optional<std::pair<double, double>> pca_eigen2d(const Eigen::Vector2d& p,
                                                     const KdTree2& index,
                                                     double r);

/// Connected components of the graph linking points within distance `tol`
/// (3D metric). Components smaller than min_size are dropped. Clusters are
/// ordered by their smallest member index; indices within a cluster ascend.
std::vector<std::vector<int>> euclidean_cluster(const PointCloud& cloud,
                                                double tol,
                                                std::size_t min_size);

}  // namespace navgen
