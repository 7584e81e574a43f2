#include "navgen/synth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "navgen/errors.hpp"
#include "navgen/map_io.hpp"

namespace navgen {

namespace fs = std::filesystem;

namespace {

constexpr double kNoiseCell = 0.05;  // roughness noise lattice, meters

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic uniform in [-1, 1] per noise cell.
double cell_noise(int64_t ix, int64_t iy, uint64_t seed) {
  uint64_t h = splitmix64(seed ^ splitmix64(static_cast<uint64_t>(ix) * 0x9e3779b97f4a7c15ull ^
                                            static_cast<uint64_t>(iy)));
  return (static_cast<double>(h >> 11) / static_cast<double>(1ull << 53)) * 2.0 - 1.0;
}

}  // namespace

bool Polygon::contains(double x, double y) const {
  bool inside = false;
  const std::size_t n = vertices.size();
  for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
    const auto& pa = vertices[a];
    const auto& pb = vertices[b];
    if ((pa.y() > y) != (pb.y() > y)) {
      const double xc = pb.x() + (y - pb.y()) / (pa.y() - pb.y()) * (pa.x() - pb.x());
      if (x < xc) inside = !inside;
    }
  }
  return inside;
}

const TerrainRegion* SceneSpec::region_at(double x, double y) const {
  const TerrainRegion* found = nullptr;
  for (const auto& r : regions) {
    if (r.footprint.contains(x, y)) found = &r;
  }
  return found;
}

double SceneSpec::base_elevation(double x, double y) const {
  for (auto it = ramps.rbegin(); it != ramps.rend(); ++it) {
    const auto& r = *it;
    if (x >= std::min(r.x0, r.x1) && x <= std::max(r.x0, r.x1) &&
        y >= std::min(r.y0, r.y1) && y <= std::max(r.y0, r.y1)) {
      const double dx = r.x1 - r.x0, dy = r.y1 - r.y0;
      double s;
      if (std::abs(dx) >= std::abs(dy)) {
        s = dx != 0 ? (x - r.x0) / dx : 0.0;
      } else {
        s = dy != 0 ? (y - r.y0) / dy : 0.0;
      }
      s = std::clamp(s, 0.0, 1.0);
      return r.z_start + s * (r.z_end - r.z_start);
    }
  }
  const TerrainRegion* r = region_at(x, y);
  return r ? r->base_elevation : 0.0;
}

double SceneSpec::elevation(double x, double y) const {
  const TerrainRegion* r = region_at(x, y);
  double z = base_elevation(x, y);
  if (r && r->roughness_amplitude > 0.0) {
    const int64_t ix = static_cast<int64_t>(std::floor(x / kNoiseCell));
    const int64_t iy = static_cast<int64_t>(std::floor(y / kNoiseCell));
    z += r->roughness_amplitude * cell_noise(ix, iy, roughness_seed);
  }
  return z;
}

namespace {

struct Hit {
  double range = std::numeric_limits<double>::infinity();
  bool valid = false;
};

Hit intersect_box(const SceneSpec& scene, const Box& b, const Point3& o,
                  const Point3& d, double t_max) {
  const double zb = scene.base_elevation(0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1));
  const double lo[3] = {std::min(b.x0, b.x1), std::min(b.y0, b.y1), zb};
  const double hi[3] = {std::max(b.x0, b.x1), std::max(b.y0, b.y1), zb + b.height};
  double t0 = 0.0, t1 = t_max;
  for (int ax = 0; ax < 3; ++ax) {
    if (d[ax] == 0.0) {
      if (o[ax] < lo[ax] || o[ax] > hi[ax]) return {};
      continue;
    }
    double ta = (lo[ax] - o[ax]) / d[ax];
    double tb = (hi[ax] - o[ax]) / d[ax];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return {};
  }
  if (t0 <= 0.0) return {};  // origin inside or behind
  return {t0, true};
}

Hit intersect_cylinder(const SceneSpec& scene, const Cylinder& c, const Point3& o,
                       const Point3& d, double t_max) {
  const double zb = scene.base_elevation(c.cx, c.cy);
  const double z_top = zb + c.height;
  Hit best;
  // Side surface.
  const double ox = o.x() - c.cx, oy = o.y() - c.cy;
  const double a = d.x() * d.x() + d.y() * d.y();
  if (a > 0.0) {
    const double bq = 2.0 * (ox * d.x() + oy * d.y());
    const double cq = ox * ox + oy * oy - c.radius * c.radius;
    const double disc = bq * bq - 4.0 * a * cq;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      for (double t : {(-bq - root) / (2 * a), (-bq + root) / (2 * a)}) {
        if (t <= 0.0 || t > t_max) continue;
        const double z = o.z() + t * d.z();
        if (z >= zb && z <= z_top && t < best.range) best = {t, true};
      }
    }
  }
  // Top cap.
  if (d.z() != 0.0) {
    const double t = (z_top - o.z()) / d.z();
    if (t > 0.0 && t <= t_max) {
      const double x = o.x() + t * d.x() - c.cx;
      const double y = o.y() + t * d.y() - c.cy;
      if (x * x + y * y <= c.radius * c.radius && t < best.range) best = {t, true};
    }
  }
  return best;
}

Hit intersect_terrain(const SceneSpec& scene, const Point3& o, const Point3& d,
                      double t_max, double max_z) {
  const double step = 0.05;
  // Height of the ray above the terrain; where no region is defined there is
  // no surface, so the ray stays "above".
  auto above = [&](double t) {
    const double x = o.x() + t * d.x();
    const double y = o.y() + t * d.y();
    if (!scene.region_at(x, y)) return 1.0;
    return o.z() + t * d.z() - scene.elevation(x, y);
  };
  double t = 0.0;
  // Skip ahead to where the ray can first reach the terrain band.
  if (o.z() > max_z) {
    if (d.z() >= 0.0) return {};
    t = (max_z - o.z()) / d.z();
    if (t >= t_max) return {};
  }
  double prev_t = t;
  if (above(t) <= 0.0) return {};  // starts at or below ground
  while (t < t_max) {
    t = std::min(t + step, t_max);
    if (above(t) <= 0.0) {
      // Bisect the crossing; the surface may be a vertical jump, which the
      // bisection resolves to the jump location.
      double lo = prev_t, hi = t;
      for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (above(mid) > 0.0) lo = mid;
        else hi = mid;
      }
      return {0.5 * (lo + hi), true};
    }
    prev_t = t;
  }
  return {};
}

double scene_max_elevation(const SceneSpec& scene) {
  double mx = 0.0;
  for (const auto& r : scene.regions) {
    mx = std::max(mx, r.base_elevation + r.roughness_amplitude);
  }
  for (const auto& r : scene.ramps) mx = std::max({mx, r.z_start, r.z_end});
  return mx;
}

}  // namespace

PointCloud raycast_scan(const SceneSpec& scene, const Pose& sensor_pose,
                        const LidarModel& lidar, uint64_t seed) {
  PointCloud cloud;
  cloud.frame = Frame::sensor;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, lidar.range_noise_sigma);

  const Eigen::Matrix3d rot = sensor_pose.rotation.toRotationMatrix();
  const Eigen::Matrix3d rot_inv = rot.transpose();
  const Point3& origin = sensor_pose.translation;
  const double max_z = scene_max_elevation(scene) + 0.01;

  const int azimuth_steps =
      static_cast<int>(std::round(360.0 / lidar.horizontal_res_deg));
  for (int ch = 0; ch < lidar.channels; ++ch) {
    const double elev_deg =
        -lidar.vertical_fov_deg / 2.0 +
        ch * lidar.vertical_fov_deg / (lidar.channels - 1);
    const double el = elev_deg * M_PI / 180.0;
    for (int az = 0; az < azimuth_steps; ++az) {
      const double a = az * lidar.horizontal_res_deg * M_PI / 180.0;
      const Point3 dir_sensor(std::cos(el) * std::cos(a),
                              std::cos(el) * std::sin(a), std::sin(el));
      const Point3 dir = rot * dir_sensor;

      double t_max = lidar.max_range;
      for (const auto& b : scene.boxes) {
        Hit h = intersect_box(scene, b, origin, dir, t_max);
        if (h.valid) t_max = h.range;
      }
      for (const auto& c : scene.cylinders) {
        Hit h = intersect_cylinder(scene, c, origin, dir, t_max);
        if (h.valid) t_max = h.range;
      }
      Hit ground = intersect_terrain(scene, origin, dir, t_max, max_z);
      double range = ground.valid ? ground.range : t_max;
      if (range >= lidar.max_range) continue;  // no return

      range += noise(rng);
      if (range <= 0.0) continue;
      const Point3 world = origin + dir * range;
      cloud.points.push_back(rot_inv * (world - origin));
      cloud.rings.push_back(ch);
    }
  }
  return cloud;
}

GroundTruth rasterize_truth(const SceneSpec& scene, double resolution,
                            double reach_step_limit) {
  GridSpec spec;
  spec.resolution = resolution;
  spec.origin_x = scene.extent_x0;
  spec.origin_y = scene.extent_y0;
  spec.width = static_cast<int>(std::ceil((scene.extent_x1 - scene.extent_x0) /
                                          resolution));
  spec.height = static_cast<int>(std::ceil((scene.extent_y1 - scene.extent_y0) /
                                           resolution));

  GroundTruth truth;
  truth.spec = spec;
  truth.positive = BinaryLayer(spec, true);
  truth.negative = BinaryLayer(spec, true);
  truth.traversable = BinaryLayer(spec, true);
  truth.explored = BinaryLayer(spec, false);

  auto inside_obstacle = [&](double x, double y) {
    for (const auto& b : scene.boxes) {
      if (x >= std::min(b.x0, b.x1) && x <= std::max(b.x0, b.x1) &&
          y >= std::min(b.y0, b.y1) && y <= std::max(b.y0, b.y1)) {
        return true;
      }
    }
    for (const auto& c : scene.cylinders) {
      const double dx = x - c.cx, dy = y - c.cy;
      if (dx * dx + dy * dy <= c.radius * c.radius) return true;
    }
    return false;
  };

  for (int j = 0; j < spec.height; ++j) {
    for (int i = 0; i < spec.width; ++i) {
      const double x = spec.center_x(i);
      const double y = spec.center_y(j);
      if (inside_obstacle(x, y)) truth.positive.set(i, j, false);
      const TerrainRegion* r = scene.region_at(x, y);
      if (r && r->label == TerrainLabel::rough) truth.traversable.set(i, j, false);
      for (const auto& step : scene.steps) {
        for (std::size_t s = 0; s + 1 < step.points.size(); ++s) {
          const Eigen::Vector2d a = step.points[s];
          const Eigen::Vector2d b = step.points[s + 1];
          const Eigen::Vector2d p(x, y);
          const Eigen::Vector2d ab = b - a;
          const double len2 = ab.squaredNorm();
          double u = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
          u = std::clamp(u, 0.0, 1.0);
          if ((p - (a + u * ab)).norm() <= resolution * 0.75) {
            truth.negative.set(i, j, false);
          }
        }
      }
    }
  }

  // Reachability flood fill from the mapping path over the base (noise-free)
  // terrain; a transition is blocked by elevation jumps and obstacles.
  std::deque<std::pair<int, int>> frontier;
  auto try_seed = [&](double x, double y) {
    if (auto cell = world_to_cell(spec, x, y)) {
      if (!truth.explored.at(cell->first, cell->second)) {
        truth.explored.set(cell->first, cell->second, true);
        frontier.push_back(*cell);
      }
    }
  };
  for (std::size_t s = 0; s + 1 < scene.path.size(); ++s) {
    const Eigen::Vector2d a = scene.path[s];
    const Eigen::Vector2d b = scene.path[s + 1];
    const double len = (b - a).norm();
    const int steps = std::max(1, static_cast<int>(std::ceil(len / (resolution / 2))));
    for (int k = 0; k <= steps; ++k) {
      const Eigen::Vector2d p = a + (b - a) * (double(k) / steps);
      try_seed(p.x(), p.y());
    }
  }
  if (scene.path.size() == 1) try_seed(scene.path[0].x(), scene.path[0].y());

  while (!frontier.empty()) {
    auto [ci, cj] = frontier.front();
    frontier.pop_front();
    const double cz = scene.base_elevation(spec.center_x(ci), spec.center_y(cj));
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        const int ni = ci + di, nj = cj + dj;
        if (!spec.contains(ni, nj) || truth.explored.at(ni, nj)) continue;
        const double x = spec.center_x(ni), y = spec.center_y(nj);
        if (inside_obstacle(x, y)) continue;
        if (std::abs(scene.base_elevation(x, y) - cz) > reach_step_limit) continue;
        truth.explored.set(ni, nj, true);
        frontier.push_back({ni, nj});
      }
    }
  }

  truth.fused = layer_and({truth.positive, truth.negative, truth.traversable,
                           truth.explored});
  return truth;
}

GroundTruth generate_dataset(const SceneSpec& scene, const LidarModel& lidar,
                             double scan_spacing, uint64_t seed,
                             const fs::path& out_dir, double resolution) {
  // Sample poses along the path polyline.
  std::vector<Eigen::Vector2d> samples;
  std::vector<double> yaws;
  double carry = 0.0;
  for (std::size_t s = 0; s + 1 < scene.path.size(); ++s) {
    const Eigen::Vector2d a = scene.path[s];
    const Eigen::Vector2d b = scene.path[s + 1];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    const double yaw = std::atan2(b.y() - a.y(), b.x() - a.x());
    double d = carry;
    while (d <= len) {
      samples.push_back(a + (b - a) * (d / len));
      yaws.push_back(yaw);
      d += scan_spacing;
    }
    carry = d - len;
  }
  if (!scene.path.empty() && samples.empty()) {
    samples.push_back(scene.path.front());
    yaws.push_back(0.0);
  }
  // Always end at the path terminus.
  if (scene.path.size() >= 2) {
    const Eigen::Vector2d end = scene.path.back();
    if ((samples.back() - end).norm() > scan_spacing * 0.25) {
      const Eigen::Vector2d prev = scene.path[scene.path.size() - 2];
      samples.push_back(end);
      yaws.push_back(std::atan2(end.y() - prev.y(), end.x() - prev.x()));
    }
  }

  Dataset ds;
  ds.mount_height = lidar.mount_height;
  ds.lidar.channels = lidar.channels;
  ds.lidar.vertical_fov_deg = lidar.vertical_fov_deg;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double x = samples[n].x();
    const double y = samples[n].y();
    if (x < scene.extent_x0 || x > scene.extent_x1 || y < scene.extent_y0 ||
        y > scene.extent_y1) {
      throw PathOutsideScene("path sample outside scene extent");
    }
    const TerrainRegion* r = scene.region_at(x, y);
    if (!r || r->label != TerrainLabel::smooth) {
      throw PathOutsideScene("path sample not on smooth terrain");
    }
    Pose pose;
    pose.translation =
        Point3(x, y, scene.base_elevation(x, y) + lidar.mount_height);
    pose.rotation = Eigen::Quaterniond(
        Eigen::AngleAxisd(yaws[n], Eigen::Vector3d::UnitZ()));
    ds.trajectory.stamps.push_back(0.5 * static_cast<double>(n));
    ds.trajectory.poses.push_back(pose);
    ds.scans.push_back(raycast_scan(scene, pose, lidar, seed + n));
  }

  save_dataset(ds, out_dir);
  GroundTruth truth = rasterize_truth(scene, resolution);
  const fs::path truth_dir = out_dir / "truth";
  fs::create_directories(truth_dir);
  write_binary_map(truth.positive, truth_dir / "positive.pgm", "positive_truth");
  write_binary_map(truth.negative, truth_dir / "negative.pgm", "negative_truth");
  write_binary_map(truth.traversable, truth_dir / "traversable.pgm",
                   "traversable_truth");
  write_binary_map(truth.explored, truth_dir / "explored.pgm", "explored_truth");
  write_binary_map(truth.fused, truth_dir / "fused.pgm", "fused_truth");
  return truth;
}

SceneSpec scene_preset(const std::string& name) {
  auto rect = [](double x0, double y0, double x1, double y1) {
    Polygon p;
    p.vertices = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    return p;
  };

  // Surface heights sit just below a 0.1 m voxel boundary so grazing rays
  // that land farther out pass above the voxel the returns fall into; flat
  // ground would otherwise decay to free in the log-odds model. Smooth
  // surfaces get sub-millimeter texture: at grazing incidence any vertical
  // roughness is amplified radially by ~1/tan(elevation), and a few
  // millimeters would already blur the ring geometry the roughness index
  // relies on.
  // Terrain regions overhang the truth extent by a margin: the map window is
  // a crop of a larger site, so scan rings do not end at the window border
  // (one-sided ring fragments would otherwise depress the roughness index in
  // the outermost cells).
  const double m = 3.0;
  SceneSpec scene;
  if (name == "curb") {
    scene.extent_x0 = 0;
    scene.extent_y0 = 0;
    scene.extent_x1 = 16;
    scene.extent_y1 = 9;
    scene.roughness_seed = 11;
    scene.regions.push_back(
        {rect(-m, -m, 16 + m, 4.0), 0.095, 0.0002, TerrainLabel::smooth});  // road
    scene.regions.push_back(
        {rect(-m, 4.0, 16 + m, 9 + m), 0.295, 0.0002, TerrainLabel::smooth});
    scene.steps.push_back({{{-m, 4.0}, {16 + m, 4.0}}, 0.2});
    scene.path = {{2, 5}, {14, 5}};
  } else if (name == "plaza") {
    scene.extent_x0 = 0;
    scene.extent_y0 = 0;
    scene.extent_x1 = 16;
    scene.extent_y1 = 16;
    scene.roughness_seed = 23;
    scene.regions.push_back(
        {rect(-m, -m, 16 + m, 16 + m), 0.095, 0.0002, TerrainLabel::smooth});
    // Gravel: rougher than the paving, still traversable.
    scene.regions.push_back(
        {rect(-m, 12, 5, 16 + m), 0.095, 0.0006, TerrainLabel::smooth});
    // Grass square: the untraversable analog. Amplitude keeps the index far
    // below t_min while limiting the radial scatter that blurs the edge.
    scene.regions.push_back(
        {rect(10, 10, 16 + m, 16 + m), 0.095, 0.02, TerrainLabel::rough});
    scene.cylinders.push_back({6, 5, 0.15, 2.0});    // pole
    scene.cylinders.push_back({12, 4, 0.15, 2.0});   // pole
    scene.cylinders.push_back({5, 10.5, 0.25, 0.8}); // litter bin
    scene.boxes.push_back({6, 11.5, 7.5, 12.0, 0.45});   // bench
    scene.boxes.push_back({14, 6.5, 15.5, 7.0, 0.45});   // bench
    scene.path = {{2, 2},   {13, 2},    {13, 8.5},
                  {8.5, 8.5}, {8.5, 13.5}, {3, 13.5}};
  } else if (name == "two_level") {
    scene.extent_x0 = 0;
    scene.extent_y0 = 0;
    scene.extent_x1 = 20;
    scene.extent_y1 = 12;
    scene.roughness_seed = 37;
    scene.regions.push_back(
        {rect(-m, -m, 9, 12 + m), 0.095, 0.0002, TerrainLabel::smooth});
    scene.regions.push_back(
        {rect(9, -m, 12, 12 + m), 0.095, 0.0002, TerrainLabel::smooth});
    scene.regions.push_back(
        {rect(12, -m, 20 + m, 12 + m), 0.895, 0.0002, TerrainLabel::smooth});
    // The ramp overrides the middle strip with a 15-degree-class incline.
    scene.ramps.push_back({9, -m, 12, 12 + m, 0.095, 0.895});
    // Unreachable elevated platform (mesa), never traversed.
    scene.regions.push_back(
        {rect(2, 8.5, 6, 11.5), 2.095, 0.0002, TerrainLabel::smooth});
    scene.path = {{2, 3}, {18, 3}};
  } else {
    throw ConfigError("unknown scene preset: " + name);
  }
  return scene;
}

std::vector<std::string> scene_preset_names() {
  return {"curb", "plaza", "two_level"};
}

}  // namespace navgen
