#include "navgen/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "navgen/errors.hpp"
#include "navgen/explored_area.hpp"
#include "navgen/fusion.hpp"
#include "navgen/geometry.hpp"
#include "navgen/map_io.hpp"
#include "navgen/negative_obstacles.hpp"
#include "navgen/occupancy.hpp"
#include "navgen/positive_obstacles.hpp"
#include "navgen/traversability.hpp"

namespace navgen {

namespace {

class StageTimer {
 public:
  explicit StageTimer(std::ostream* log) : log_(log) {}
  void mark(const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    if (log_) {
      const double s = std::chrono::duration<double>(now - last_).count();
      (*log_) << "[build-map] " << stage << ": " << s << " s\n";
    }
    last_ = now;
  }

 private:
  std::ostream* log_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

GridSpec derive_spec(const std::vector<PointCloud>& world_scans,
                     const Trajectory& trajectory, double resolution) {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  auto grow = [&](double x, double y) {
    min_x = std::min(min_x, x);
    min_y = std::min(min_y, y);
    max_x = std::max(max_x, x);
    max_y = std::max(max_y, y);
  };
  for (const auto& scan : world_scans) {
    for (const auto& p : scan.points) grow(p.x(), p.y());
  }
  for (const auto& pose : trajectory.poses) {
    grow(pose.translation.x(), pose.translation.y());
  }
  if (!std::isfinite(min_x)) {
    throw NoCoverage("dataset contains no points");
  }
  GridSpec spec;
  spec.resolution = resolution;
  // Snap the origin to the absolute resolution lattice so grids built from
  // different data over the same site stay crop-compatible.
  spec.origin_x = std::floor(min_x / resolution) * resolution;
  spec.origin_y = std::floor(min_y / resolution) * resolution;
  spec.width = int(std::ceil((max_x - spec.origin_x) / resolution)) + 1;
  spec.height = int(std::ceil((max_y - spec.origin_y) / resolution)) + 1;
  return spec;
}

}  // namespace

MapBundle build_map(const Dataset& dataset, const PipelineConfig& config,
                    std::ostream* log) {
  config.validate();
  StageTimer timer(log);

  std::vector<PointCloud> world_scans;
  world_scans.reserve(dataset.scans.size());
  for (std::size_t n = 0; n < dataset.scans.size(); ++n) {
    world_scans.push_back(
        transform_cloud(dataset.scans[n], dataset.trajectory.poses[n]));
  }
  timer.mark("transform");

  MapBundle bundle;
  bundle.spec = derive_spec(world_scans, dataset.trajectory, config.resolution);
  bundle.counts.scans = world_scans.size();
  for (const auto& scan : world_scans) bundle.counts.points += scan.points.size();

  OccupancyOctree octree(config.occupancy);
  for (std::size_t n = 0; n < world_scans.size(); ++n) {
    octree.integrate_scan(dataset.trajectory.poses[n].translation,
                          world_scans[n]);
  }
  bundle.counts.occupied_voxels = octree.voxel_count();
  bundle.counts.degenerate_rays = octree.degenerate_rays();
  timer.mark("occupancy");

  bundle.traj_footprint = trajectory_footprint_layer(
      dataset.trajectory, config.traversability.footprint_radius, bundle.spec);

  // Explored area and elevation feed every later stage.
  const PointCloud ground_centroids =
      octree.occupied_centroids(config.ground.o_ground);
  const KdTree3 ground_index = build_index3(ground_centroids);
  const GroundCandidates ground_cand =
      candidate_ground_points(ground_centroids, ground_index, config.ground);
  const PointCloud ground = select_connected_clusters(
      ground_cand.points, dataset.trajectory, config.ground);
  bundle.counts.ground_points = ground.points.size();
  bundle.explored = build_explored_layer(ground, bundle.traj_footprint,
                                         bundle.spec, config.ground);
  bundle.elevation = build_elevation_map(ground, bundle.spec);
  bundle.counts.explored_cells = bundle.explored.count_true();
  timer.mark("explored");

  const PointCloud obs_centroids =
      octree.occupied_centroids(config.obstacle.o_obs);
  const KdTree3 obs_index = build_index3(obs_centroids);
  PointCloud obs_cand =
      candidate_obstacle_points(obs_centroids, obs_index, config.obstacle);
  obs_cand = height_filter(obs_cand, bundle.elevation, config.obstacle,
                           HeightFilterMode::discard_above);
  bundle.positive = build_positive_layer(obs_cand, bundle.traj_footprint,
                                         bundle.spec, config.obstacle);
  bundle.counts.positive_blocked_cells =
      bundle.positive.spec.cell_count() - bundle.positive.count_true();
  timer.mark("positive");

  std::vector<TaggedCloud> tagged;
  tagged.reserve(world_scans.size());
  for (const auto& scan : world_scans) {
    tagged.push_back(scan_roughness(scan, bundle.elevation,
                                    config.traversability));
  }
  bundle.trav_index = aggregate_index(tagged, bundle.spec);
  const std::vector<double> traj_indices = trajectory_indices(
      bundle.trav_index, dataset.trajectory,
      config.traversability.footprint_radius);
  BinaryLayer trav_pre_closure;
  bundle.traversable = threshold_traversability(
      bundle.trav_index, dataset.trajectory, traj_indices,
      config.traversability, bundle.traj_footprint, &trav_pre_closure);
  bundle.counts.not_traversable_cells =
      bundle.traversable.spec.cell_count() - bundle.traversable.count_true();
  timer.mark("traversability");

  const MultiElevationMap mem =
      octree.to_multi_elevation(bundle.spec, config.ground.o_ground);
  const MultiElevationMap expanded =
      expand_multi_elevation(mem, config.negative.n_expansions);
  bundle.negative =
      detect_negative(expanded, bundle.elevation, trav_pre_closure,
                      bundle.traj_footprint, bundle.spec, config.negative);
  bundle.counts.negative_blocked_cells =
      bundle.negative.spec.cell_count() - bundle.negative.count_true();
  timer.mark("negative");

  bundle.fused = fuse(bundle.positive, bundle.negative, bundle.traversable,
                      bundle.explored, bundle.traj_footprint);
  bundle.counts.fused_traversable_cells = bundle.fused.count_true();
  timer.mark("fusion");
  return bundle;
}

void write_map_outputs(const MapBundle& bundle, const PipelineConfig& config,
                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_binary_map(bundle.explored, out_dir / "explored.pgm", "explored",
                   "true=explored");
  write_binary_map(bundle.positive, out_dir / "positive.pgm", "positive",
                   "true=free_of_positive_obstacles");
  write_scalar_grid(index_map_to_grid(bundle.trav_index),
                    out_dir / "traversability_index.csv",
                    "traversability_index", "per-cell mean eigenvalue ratio");
  write_binary_map(bundle.traversable, out_dir / "traversable.pgm",
                   "traversable", "true=traversable");
  write_binary_map(bundle.negative, out_dir / "negative.pgm", "negative",
                   "true=free_of_negative_obstacles");
  write_binary_map(bundle.fused, out_dir / "fused.pgm", "fused",
                   "true=traversable");

  std::ofstream manifest(out_dir / "manifest.txt");
  manifest << "# build-map run manifest\n";
  manifest << "# config\n" << config.echo();
  manifest << "# counts\n";
  const auto& c = bundle.counts;
  manifest << "scans = " << c.scans << "\n";
  manifest << "points = " << c.points << "\n";
  manifest << "occupied_voxels = " << c.occupied_voxels << "\n";
  manifest << "degenerate_rays = " << c.degenerate_rays << "\n";
  manifest << "ground_points = " << c.ground_points << "\n";
  manifest << "explored_cells = " << c.explored_cells << "\n";
  manifest << "positive_blocked_cells = " << c.positive_blocked_cells << "\n";
  manifest << "not_traversable_cells = " << c.not_traversable_cells << "\n";
  manifest << "negative_blocked_cells = " << c.negative_blocked_cells << "\n";
  manifest << "fused_traversable_cells = " << c.fused_traversable_cells << "\n";
  manifest << "grid_width = " << bundle.spec.width << "\n";
  manifest << "grid_height = " << bundle.spec.height << "\n";
  char buf[96];
  std::snprintf(buf, sizeof(buf), "grid_origin = %.17g %.17g\n",
                bundle.spec.origin_x, bundle.spec.origin_y);
  manifest << buf;
}

}  // namespace navgen
