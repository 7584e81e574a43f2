#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <vector>

#include "navgen/errors.hpp"

namespace navgen {

using Point3 = Eigen::Vector3d;

enum class Frame { sensor, world };

/// Point cloud with optional per-point LiDAR ring ids. `rings` is either
/// empty (untagged cloud) or parallel to `points`.
struct PointCloud {
  std::vector<Point3> points;
  std::vector<int> rings;
  Frame frame = Frame::sensor;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_rings() const { return !rings.empty(); }
};

struct Pose {
  Point3 translation = Point3::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
};

/// Time-ordered robot poses, one per scan. Timestamps strictly increasing.
struct Trajectory {
  std::vector<double> stamps;
  std::vector<Pose> poses;

  std::size_t size() const { return poses.size(); }
  bool empty() const { return poses.empty(); }
};

/// Rigid transform of a sensor-frame cloud into the world frame.
/// Point order and ring tags are preserved.
PointCloud transform_cloud(const PointCloud& cloud, const Pose& pose);

}  // namespace navgen
