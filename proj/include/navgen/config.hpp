#pragma once

#include <filesystem>
#include <string>

#include "navgen/explored_area.hpp"
#include "navgen/negative_obstacles.hpp"
#include "navgen/occupancy.hpp"
#include "navgen/traversability.hpp"

namespace navgen {

/// Every tunable of the mapping pipeline, preloaded with the defaults.
/// The on-disk form is flat `key = value` text (# starts a comment). A file,
/// when given, must assign every key exactly once: unknown or missing keys
/// are reported by name via ConfigError. Keeping the file total makes a run
/// fully described by its config echo.
struct PipelineConfig {
  double resolution = 0.1;  // 2D map cell size, meters

  OccupancyParams occupancy;
  GroundConfig ground;
  ObstacleConfig obstacle;
  TraversabilityConfig traversability;
  NegativeConfig negative;

  static PipelineConfig from_file(const std::filesystem::path& path);

  /// Deterministic `key = value` listing of every parameter, one per line,
  /// suitable both as a config file and as the manifest echo.
  std::string echo() const;

  /// Cross-field sanity checks (throws ConfigError).
  void validate() const;
};

}  // namespace navgen
