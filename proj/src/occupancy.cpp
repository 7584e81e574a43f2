#include "navgen/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace navgen {

namespace {

constexpr int kDepth = 13;               // 8192 voxels per axis
constexpr int kHalf = 1 << (kDepth - 1);  // index range [-kHalf, kHalf)

double logit(double p) { return std::log(p / (1.0 - p)); }

struct KeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : k) {
      h ^= static_cast<std::size_t>(static_cast<uint32_t>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

std::vector<VoxelKey> traverse_ray(const Point3& origin, const Point3& end,
                                   double voxel_size) {
  std::vector<VoxelKey> out;
  VoxelKey cur, last;
  for (int d = 0; d < 3; ++d) {
    cur[d] = static_cast<int>(std::floor(origin[d] / voxel_size));
    last[d] = static_cast<int>(std::floor(end[d] / voxel_size));
  }
  if (cur == last) return out;

  const Point3 dir = end - origin;
  const double len = dir.norm();
  std::array<int, 3> step{};
  std::array<double, 3> t_max{}, t_delta{};
  for (int d = 0; d < 3; ++d) {
    if (dir[d] > 0) {
      step[d] = 1;
      const double boundary = (cur[d] + 1) * voxel_size;
      t_max[d] = (boundary - origin[d]) / dir[d];
      t_delta[d] = voxel_size / dir[d];
    } else if (dir[d] < 0) {
      step[d] = -1;
      const double boundary = cur[d] * voxel_size;
      t_max[d] = (boundary - origin[d]) / dir[d];
      t_delta[d] = -voxel_size / dir[d];
    } else {
      step[d] = 0;
      t_max[d] = std::numeric_limits<double>::infinity();
      t_delta[d] = std::numeric_limits<double>::infinity();
    }
  }

  // Hard cap guards against degenerate float geometry.
  const std::size_t max_steps =
      static_cast<std::size_t>(3.0 * len / voxel_size) + 6;
  out.push_back(cur);
  for (std::size_t n = 0; n < max_steps; ++n) {
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    if (t_max[axis] > 1.0) break;  // next crossing is past the endpoint
    cur[axis] += step[axis];
    t_max[axis] += t_delta[axis];
    if (cur == last) break;
    out.push_back(cur);
  }
  return out;
}

struct OccupancyOctree::Node {
  std::array<std::unique_ptr<Node>, 8> child;
  float value = 0.0f;  // meaningful at leaf depth only
};

OccupancyOctree::OccupancyOctree(const OccupancyParams& params)
    : params_(params),
      log_hit_(logit(params.p_hit)),
      log_miss_(logit(params.p_miss)),
      clamp_min_(logit(params.clamp_min_prob)),
      clamp_max_(logit(params.clamp_max_prob)),
      root_(std::make_unique<Node>()) {}

OccupancyOctree::~OccupancyOctree() = default;
OccupancyOctree::OccupancyOctree(OccupancyOctree&&) noexcept = default;
OccupancyOctree& OccupancyOctree::operator=(OccupancyOctree&&) noexcept = default;

VoxelKey OccupancyOctree::key_of(const Point3& p) const {
  VoxelKey k;
  for (int d = 0; d < 3; ++d) {
    k[d] = static_cast<int>(std::floor(p[d] / params_.voxel_size));
  }
  return k;
}

Point3 OccupancyOctree::center_of(const VoxelKey& k) const {
  return Point3((k[0] + 0.5) * params_.voxel_size,
                (k[1] + 0.5) * params_.voxel_size,
                (k[2] + 0.5) * params_.voxel_size);
}

float* OccupancyOctree::find(const VoxelKey& k) const {
  Node* node = root_.get();
  for (int level = kDepth - 1; level >= 0; --level) {
    int idx = (((k[0] + kHalf) >> level) & 1) |
              ((((k[1] + kHalf) >> level) & 1) << 1) |
              ((((k[2] + kHalf) >> level) & 1) << 2);
    node = node->child[idx].get();
    if (!node) return nullptr;
  }
  return &node->value;
}

float& OccupancyOctree::touch(const VoxelKey& k) {
  Node* node = root_.get();
  for (int level = kDepth - 1; level >= 0; --level) {
    int idx = (((k[0] + kHalf) >> level) & 1) |
              ((((k[1] + kHalf) >> level) & 1) << 1) |
              ((((k[2] + kHalf) >> level) & 1) << 2);
    if (!node->child[idx]) node->child[idx] = std::make_unique<Node>();
    node = node->child[idx].get();
  }
  return node->value;
}

void OccupancyOctree::apply_update(const VoxelKey& k, double delta) {
  float& v = touch(k);
  double next = static_cast<double>(v) + delta;
  next = std::clamp(next, clamp_min_, clamp_max_);
  v = static_cast<float>(next);
}

double OccupancyOctree::log_odds(const VoxelKey& k) const {
  const float* v = find(k);
  return v ? static_cast<double>(*v) : 0.0;
}

double OccupancyOctree::probability(const VoxelKey& k) const {
  return 1.0 / (1.0 + std::exp(-log_odds(k)));
}

void OccupancyOctree::integrate_scan(const Point3& sensor_origin,
                                     const PointCloud& world_cloud) {
  std::unordered_set<VoxelKey, KeyHash> hits;
  std::unordered_set<VoxelKey, KeyHash> misses;
  for (const auto& p : world_cloud.points) {
    const Point3 delta = p - sensor_origin;
    const double range = delta.norm();
    if (range == 0.0) {
      ++degenerate_rays_;
      continue;
    }
    hits.insert(key_of(p));
    Point3 carve_end = p;
    if (range > params_.max_ray_length) {
      carve_end = sensor_origin + delta * (params_.max_ray_length / range);
    }
    for (const auto& k : traverse_ray(sensor_origin, carve_end,
                                      params_.voxel_size)) {
      misses.insert(k);
    }
  }
  // Hit wins over miss within a single scan.
  std::vector<VoxelKey> hit_keys(hits.begin(), hits.end());
  std::sort(hit_keys.begin(), hit_keys.end());
  for (const auto& k : hit_keys) apply_update(k, log_hit_);
  std::vector<VoxelKey> miss_keys;
  miss_keys.reserve(misses.size());
  for (const auto& k : misses) {
    if (!hits.count(k)) miss_keys.push_back(k);
  }
  std::sort(miss_keys.begin(), miss_keys.end());
  for (const auto& k : miss_keys) apply_update(k, log_miss_);
}

void OccupancyOctree::collect(
    const Node* node, int depth, VoxelKey base,
    std::vector<std::pair<VoxelKey, float>>& out) const {
  if (depth == kDepth) {
    out.emplace_back(
        VoxelKey{base[0] - kHalf, base[1] - kHalf, base[2] - kHalf},
        node->value);
    return;
  }
  for (int idx = 0; idx < 8; ++idx) {
    if (!node->child[idx]) continue;
    VoxelKey next = {(base[0] << 1) | (idx & 1), (base[1] << 1) | ((idx >> 1) & 1),
                     (base[2] << 1) | ((idx >> 2) & 1)};
    collect(node->child[idx].get(), depth + 1, next, out);
  }
}

std::size_t OccupancyOctree::voxel_count() const {
  std::vector<std::pair<VoxelKey, float>> all;
  collect(root_.get(), 0, {0, 0, 0}, all);
  return all.size();
}

PointCloud OccupancyOctree::occupied_centroids(double threshold) const {
  std::vector<std::pair<VoxelKey, float>> all;
  collect(root_.get(), 0, {0, 0, 0}, all);
  const double min_logodds = logit(threshold);
  std::vector<VoxelKey> keys;
  for (const auto& [k, v] : all) {
    if (static_cast<double>(v) > min_logodds) keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  PointCloud cloud;
  cloud.frame = Frame::world;
  cloud.points.reserve(keys.size());
  for (const auto& k : keys) cloud.points.push_back(center_of(k));
  return cloud;
}

MultiElevationMap OccupancyOctree::to_multi_elevation(const GridSpec& spec,
                                                      double threshold) const {
  MultiElevationMap mem(spec);
  const PointCloud centers = occupied_centroids(threshold);
  for (const auto& p : centers.points) {
    auto cell = world_to_cell(spec, p.x(), p.y());
    if (!cell) {
      ++dropped_voxels_;
      continue;
    }
    mem.values[spec.index(cell->first, cell->second)].push_back(p.z());
  }
  for (auto& v : mem.values) std::sort(v.begin(), v.end());
  return mem;
}

}  // namespace navgen
