#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "navgen/types.hpp"

namespace navgen {

struct LidarDescriptor {
  int channels = 16;
  double vertical_fov_deg = 30.0;  // total span, symmetric about horizontal
};

struct Dataset {
  Trajectory trajectory;
  std::vector<PointCloud> scans;  // sensor frame, paired with trajectory rows
  double mount_height = 0.6;
  LidarDescriptor lidar;
};

/// Dataset layout under `root`:
///   trajectory.csv   header t,x,y,z,qx,qy,qz,qw; one row per scan
///   scans/NNNNNN.csv header ring,x,y,z; zero-padded scan index
///   sensor.meta      key = value: channels, vertical_fov_deg, mount_height
Dataset load_dataset(const std::filesystem::path& root);

/// Writers for the same layout (used by the synthetic generator).
void save_dataset(const Dataset& ds, const std::filesystem::path& root);

}  // namespace navgen
