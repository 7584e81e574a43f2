#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "navgen/dataset_io.hpp"
#include "navgen/grid.hpp"
#include "navgen/types.hpp"

namespace navgen {

enum class TerrainLabel { smooth, rough };

/// Simple polygon in the xy plane (even-odd containment).
struct Polygon {
  std::vector<Eigen::Vector2d> vertices;
  bool contains(double x, double y) const;
};

struct TerrainRegion {
  Polygon footprint;
  double base_elevation = 0.0;
  double roughness_amplitude = 0.0;
  TerrainLabel label = TerrainLabel::smooth;
};

/// Rectangular ramp: elevation interpolates linearly from z_start at
/// (x0, y0) edge to z_end at the (x1, y1) edge along the longer axis.
struct Ramp {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double z_start = 0, z_end = 0;
};

struct Box {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double height = 0;  // above local terrain
};

struct Cylinder {
  double cx = 0, cy = 0, radius = 0;
  double height = 0;
};

/// Step (curb) polyline, recorded for ground-truth labeling; the elevation
/// discontinuity itself comes from adjoining terrain regions.
struct StepLine {
  std::vector<Eigen::Vector2d> points;
  double drop = 0;
};

struct SceneSpec {
  std::vector<TerrainRegion> regions;  // later regions override earlier ones
  std::vector<Ramp> ramps;             // override regions where they apply
  std::vector<Box> boxes;
  std::vector<Cylinder> cylinders;
  std::vector<StepLine> steps;
  std::vector<Eigen::Vector2d> path;   // mapping trajectory polyline
  double extent_x0 = 0, extent_y0 = 0, extent_x1 = 0, extent_y1 = 0;
  uint64_t roughness_seed = 0;

  /// Terrain elevation without roughness noise.
  double base_elevation(double x, double y) const;
  /// Terrain elevation with the deterministic per-cell roughness noise.
  double elevation(double x, double y) const;
  /// Roughness amplitude and label of the owning region.
  const TerrainRegion* region_at(double x, double y) const;
};

struct LidarModel {
  int channels = 16;
  double vertical_fov_deg = 30.0;      // total, symmetric
  double horizontal_res_deg = 0.4;
  double mount_height = 0.6;
  double range_noise_sigma = 0.01;
  double max_range = 20.0;
};

/// One simulated revolution from the given sensor pose: one ray per
/// (channel, azimuth step), nearest surface hit within max range, Gaussian
/// range noise, rays without a return omitted. Deterministic for a fixed
/// (scene, pose, seed).
PointCloud raycast_scan(const SceneSpec& scene, const Pose& sensor_pose,
                        const LidarModel& lidar, uint64_t seed);

struct GroundTruth {
  GridSpec spec;
  BinaryLayer positive;     // true = free of positive obstacles
  BinaryLayer negative;     // true = free of step lines
  BinaryLayer traversable;  // true = smooth terrain
  BinaryLayer explored;     // true = reachable from the path
  BinaryLayer fused;
};

/// Analytic ground-truth rasterization of the scene at the given resolution.
GroundTruth rasterize_truth(const SceneSpec& scene, double resolution,
                            double reach_step_limit = 0.08);

/// Samples poses along the scene path (yaw follows the tangent), raycasts
/// and writes a dataset in the standard on-disk layout plus
/// truth/<layer>.pgm[.meta]. Throws PathOutsideScene when a pose would fall
/// outside the scene extent or on non-smooth terrain.
GroundTruth generate_dataset(const SceneSpec& scene, const LidarModel& lidar,
                             double scan_spacing, uint64_t seed,
                             const std::filesystem::path& out_dir,
                             double resolution = 0.1);

/// Bundled scene presets: "curb", "plaza", "two_level".
SceneSpec scene_preset(const std::string& name);
std::vector<std::string> scene_preset_names();

}  // namespace navgen
