#include "navgen/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "navgen/errors.hpp"

namespace navgen {

namespace {

struct Key {
  const char* name;
  std::function<double(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, double)> set;
  bool integral = false;
};

constexpr double kDeg = M_PI / 180.0;

// Shared knobs (normal radius, cluster tolerance, ground band, closure
// radius, ...) fan out to every consumer so one file line configures them
// all; the negative-obstacle re-detection pass reuses the obstacle block.
std::vector<Key> key_table() {
  auto d = [](auto getter, auto setter, const char* name) {
    return Key{name, getter, setter, false};
  };
  auto n = [](auto getter, auto setter, const char* name) {
    return Key{name, getter, setter, true};
  };
  return {
      d([](const PipelineConfig& c) { return c.resolution; },
        [](PipelineConfig& c, double v) { c.resolution = v; }, "resolution"),
      d([](const PipelineConfig& c) { return c.occupancy.voxel_size; },
        [](PipelineConfig& c, double v) { c.occupancy.voxel_size = v; },
        "voxel_size"),
      d([](const PipelineConfig& c) { return c.occupancy.p_hit; },
        [](PipelineConfig& c, double v) { c.occupancy.p_hit = v; }, "p_hit"),
      d([](const PipelineConfig& c) { return c.occupancy.p_miss; },
        [](PipelineConfig& c, double v) { c.occupancy.p_miss = v; }, "p_miss"),
      d([](const PipelineConfig& c) { return c.occupancy.clamp_min_prob; },
        [](PipelineConfig& c, double v) { c.occupancy.clamp_min_prob = v; },
        "clamp_min"),
      d([](const PipelineConfig& c) { return c.occupancy.clamp_max_prob; },
        [](PipelineConfig& c, double v) { c.occupancy.clamp_max_prob = v; },
        "clamp_max"),
      d([](const PipelineConfig& c) { return c.occupancy.max_ray_length; },
        [](PipelineConfig& c, double v) { c.occupancy.max_ray_length = v; },
        "max_ray_length"),
      d([](const PipelineConfig& c) { return c.ground.o_ground; },
        [](PipelineConfig& c, double v) { c.ground.o_ground = v; }, "o_ground"),
      d([](const PipelineConfig& c) { return c.ground.alpha_ground / kDeg; },
        [](PipelineConfig& c, double v) { c.ground.alpha_ground = v * kDeg; },
        "alpha_ground_deg"),
      d([](const PipelineConfig& c) { return c.ground.normal_radius; },
        [](PipelineConfig& c, double v) {
          c.ground.normal_radius = v;
          c.obstacle.normal_radius = v;
          c.negative.obstacle.normal_radius = v;
        },
        "normal_radius"),
      d([](const PipelineConfig& c) { return c.ground.cluster_tolerance; },
        [](PipelineConfig& c, double v) {
          c.ground.cluster_tolerance = v;
          c.obstacle.cluster_tolerance = v;
          c.negative.obstacle.cluster_tolerance = v;
        },
        "cluster_tolerance"),
      d([](const PipelineConfig& c) { return c.ground.d_xy_ground; },
        [](PipelineConfig& c, double v) { c.ground.d_xy_ground = v; },
        "d_xy_ground"),
      d([](const PipelineConfig& c) { return c.ground.d_z_ground; },
        [](PipelineConfig& c, double v) { c.ground.d_z_ground = v; },
        "d_z_ground"),
      n([](const PipelineConfig& c) { return double(c.ground.closure_radius); },
        [](PipelineConfig& c, double v) {
          c.ground.closure_radius = int(v);
          c.traversability.closure_radius = int(v);
          c.negative.closure_radius = int(v);
        },
        "closure_radius"),
      d([](const PipelineConfig& c) { return c.obstacle.o_obs; },
        [](PipelineConfig& c, double v) {
          c.obstacle.o_obs = v;
          c.negative.obstacle.o_obs = v;
        },
        "o_obs"),
      d([](const PipelineConfig& c) { return c.obstacle.alpha_obs / kDeg; },
        [](PipelineConfig& c, double v) {
          c.obstacle.alpha_obs = v * kDeg;
          c.negative.obstacle.alpha_obs = v * kDeg;
        },
        "alpha_obs_deg"),
      d([](const PipelineConfig& c) { return c.obstacle.z_th; },
        [](PipelineConfig& c, double v) {
          c.obstacle.z_th = v;
          c.negative.obstacle.z_th = v;
        },
        "z_th"),
      d([](const PipelineConfig& c) { return c.obstacle.z_band; },
        [](PipelineConfig& c, double v) {
          c.obstacle.z_band = v;
          c.negative.obstacle.z_band = v;
          c.traversability.z_band = v;
        },
        "z_band"),
      d([](const PipelineConfig& c) { return c.obstacle.fallback_radius; },
        [](PipelineConfig& c, double v) {
          c.obstacle.fallback_radius = v;
          c.negative.obstacle.fallback_radius = v;
          c.traversability.fallback_radius = v;
        },
        "fallback_radius"),
      n([](const PipelineConfig& c) { return double(c.obstacle.min_cluster_size); },
        [](PipelineConfig& c, double v) {
          c.obstacle.min_cluster_size = std::size_t(v);
          c.negative.obstacle.min_cluster_size = std::size_t(v);
        },
        "min_cluster_size"),
      d([](const PipelineConfig& c) { return c.traversability.gamma; },
        [](PipelineConfig& c, double v) { c.traversability.gamma = v; }, "gamma"),
      d([](const PipelineConfig& c) { return c.traversability.t_min; },
        [](PipelineConfig& c, double v) { c.traversability.t_min = v; }, "t_min"),
      d([](const PipelineConfig& c) { return c.traversability.r_2d; },
        [](PipelineConfig& c, double v) { c.traversability.r_2d = v; }, "r_2d"),
      d([](const PipelineConfig& c) { return c.traversability.footprint_radius; },
        [](PipelineConfig& c, double v) { c.traversability.footprint_radius = v; },
        "footprint_radius"),
      n([](const PipelineConfig& c) { return double(c.negative.n_expansions); },
        [](PipelineConfig& c, double v) { c.negative.n_expansions = int(v); },
        "n_expansions"),
  };
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());

  const auto keys = key_table();
  std::map<std::string, std::size_t> by_name;
  for (std::size_t k = 0; k < keys.size(); ++k) by_name[keys[k].name] = k;

  PipelineConfig cfg;
  std::vector<bool> seen(keys.size(), false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name, eq;
    if (!(ls >> name)) continue;  // blank line
    double value = 0.0;
    if (!(ls >> eq >> value) || eq != "=") {
      throw ConfigError("malformed config line " + std::to_string(lineno) +
                        ": expected `key = value`");
    }
    std::string rest;
    if (ls >> rest) {
      throw ConfigError("trailing text on config line " + std::to_string(lineno));
    }
    auto it = by_name.find(name);
    if (it == by_name.end()) throw ConfigError("unknown config key: " + name);
    if (seen[it->second]) throw ConfigError("duplicate config key: " + name);
    const Key& key = keys[it->second];
    if (key.integral &&
        (value != std::floor(value) || value < 0 || !std::isfinite(value))) {
      throw ConfigError("config key " + name + " must be a non-negative integer");
    }
    key.set(cfg, value);
    seen[it->second] = true;
  }
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (!seen[k]) {
      throw ConfigError(std::string("missing config key: ") + keys[k].name);
    }
  }
  cfg.validate();
  return cfg;
}

std::string PipelineConfig::echo() const {
  std::string out;
  char buf[128];
  for (const auto& key : key_table()) {
    if (key.integral) {
      std::snprintf(buf, sizeof(buf), "%s = %d\n", key.name,
                    int(key.get(*this)));
    } else {
      std::snprintf(buf, sizeof(buf), "%s = %g\n", key.name, key.get(*this));
    }
    out += buf;
  }
  return out;
}

void PipelineConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(resolution > 0, "resolution must be positive");
  require(occupancy.voxel_size > 0, "voxel_size must be positive");
  require(occupancy.p_hit > 0.5 && occupancy.p_hit < 1,
          "p_hit must lie in (0.5, 1)");
  require(occupancy.p_miss > 0 && occupancy.p_miss < 0.5,
          "p_miss must lie in (0, 0.5)");
  require(occupancy.clamp_min_prob > 0 &&
              occupancy.clamp_min_prob < occupancy.clamp_max_prob &&
              occupancy.clamp_max_prob < 1,
          "clamp bounds must satisfy 0 < clamp_min < clamp_max < 1");
  require(occupancy.max_ray_length > 0, "max_ray_length must be positive");
  require(ground.o_ground > 0 && ground.o_ground < 1,
          "o_ground must lie in (0, 1)");
  require(obstacle.o_obs > 0 && obstacle.o_obs < 1, "o_obs must lie in (0, 1)");
  require(traversability.gamma >= 0, "gamma must be non-negative");
  require(traversability.t_min >= 0, "t_min must be non-negative");
  negative.validate();
}

}  // namespace navgen
