// Python bindings for the main mapping, generation and validation entry
// points. Heavy data stays on disk in the standard formats; the bindings
// move paths, scalars and small grids only.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <vector>

#include "navgen/config.hpp"
#include "navgen/dataset_io.hpp"
#include "navgen/map_io.hpp"
#include "navgen/morphology.hpp"
#include "navgen/pipeline.hpp"
#include "navgen/synth.hpp"
#include "navgen/validation.hpp"

namespace py = pybind11;
using namespace navgen;

namespace {

BinaryLayer layer_from_rows(const std::vector<std::vector<bool>>& rows,
                            double resolution) {
  if (rows.empty() || rows.front().empty()) {
    throw py::value_error("grid must be non-empty");
  }
  GridSpec spec;
  spec.resolution = resolution;
  spec.height = static_cast<int>(rows.size());
  spec.width = static_cast<int>(rows.front().size());
  BinaryLayer layer(spec);
  for (int j = 0; j < spec.height; ++j) {
    if (static_cast<int>(rows[j].size()) != spec.width) {
      throw py::value_error("grid rows must have equal length");
    }
    for (int i = 0; i < spec.width; ++i) layer.set(i, j, rows[j][i]);
  }
  return layer;
}

std::vector<std::vector<bool>> rows_from_layer(const BinaryLayer& layer) {
  std::vector<std::vector<bool>> rows(layer.spec.height);
  for (int j = 0; j < layer.spec.height; ++j) {
    rows[j].resize(layer.spec.width);
    for (int i = 0; i < layer.spec.width; ++i) rows[j][i] = layer.at(i, j);
  }
  return rows;
}

py::dict spec_dict(const GridSpec& spec) {
  py::dict d;
  d["resolution"] = spec.resolution;
  d["origin_x"] = spec.origin_x;
  d["origin_y"] = spec.origin_y;
  d["width"] = spec.width;
  d["height"] = spec.height;
  return d;
}

}  // namespace

PYBIND11_MODULE(_navgen, m) {
  m.doc() = "LiDAR scans + trajectory -> fused 2D navigation map";

  py::register_exception<Error>(m, "NavgenError", PyExc_RuntimeError);

  m.def(
      "scene_presets", [] { return scene_preset_names(); },
      "Names of the bundled synthetic scene presets.");

  m.def(
      "generate_dataset",
      [](const std::string& scene, const std::filesystem::path& out_dir,
         uint64_t seed, double spacing) {
        SceneSpec spec = scene_preset(scene);
        LidarModel lidar;
        GroundTruth truth = generate_dataset(spec, lidar, spacing, seed, out_dir);
        py::dict out;
        out["spec"] = spec_dict(truth.spec);
        out["explored_cells"] = truth.explored.count_true();
        out["fused_traversable_cells"] = truth.fused.count_true();
        return out;
      },
      py::arg("scene"), py::arg("out_dir"), py::arg("seed") = 1,
      py::arg("spacing") = 0.25,
      "Generate a synthetic dataset plus ground-truth maps for a preset.");

  m.def(
      "build_map",
      [](const std::filesystem::path& dataset_dir,
         const std::filesystem::path& out_dir, const std::string& config_path) {
        PipelineConfig config;
        if (!config_path.empty()) {
          config = PipelineConfig::from_file(config_path);
        }
        Dataset dataset = load_dataset(dataset_dir);
        MapBundle bundle = build_map(dataset, config, nullptr);
        write_map_outputs(bundle, config, out_dir);
        py::dict out;
        out["spec"] = spec_dict(bundle.spec);
        out["scans"] = bundle.counts.scans;
        out["points"] = bundle.counts.points;
        out["occupied_voxels"] = bundle.counts.occupied_voxels;
        out["ground_points"] = bundle.counts.ground_points;
        out["explored_cells"] = bundle.counts.explored_cells;
        out["fused_traversable_cells"] = bundle.counts.fused_traversable_cells;
        return out;
      },
      py::arg("dataset_dir"), py::arg("out_dir"), py::arg("config") = "",
      "Run the full mapping pipeline on a dataset directory.");

  m.def(
      "validate",
      [](const std::filesystem::path& pred_dir,
         const std::filesystem::path& truth_dir,
         const std::filesystem::path& out_dir, std::size_t n, uint64_t seed,
         double robot_radius) {
        BinaryLayer pred = read_binary_map(pred_dir / "fused.pgm");
        BinaryLayer truth = read_binary_map(truth_dir / "fused.pgm");
        if (!(pred.spec == truth.spec)) {
          GridSpec common = intersect_specs(pred.spec, truth.spec);
          pred = crop(pred, common);
          truth = crop(truth, common);
        }
        ValidationReport report = monte_carlo(pred, truth, n, seed, robot_radius);
        write_report(report, out_dir);
        py::dict out;
        out["accuracy"] = report.pixels.accuracy;
        out["precision"] = report.pixels.precision;
        out["recall"] = report.pixels.recall;
        out["success_agreement"] = report.success_agreement;
        out["failure_agreement"] = report.failure_agreement;
        out["mean_overlength"] = report.mean_overlength;
        out["n"] = report.n;
        return out;
      },
      py::arg("pred_dir"), py::arg("truth_dir"), py::arg("out_dir"),
      py::arg("n") = 1000, py::arg("seed") = 1, py::arg("radius") = 0.3,
      "Compare two fused maps: pixel metrics plus the planning protocol.");

  m.def(
      "read_map",
      [](const std::filesystem::path& path) {
        BinaryLayer layer = read_binary_map(path);
        py::dict out;
        out["spec"] = spec_dict(layer.spec);
        out["cells"] = rows_from_layer(layer);
        out["count_true"] = layer.count_true();
        return out;
      },
      py::arg("path"), "Read a binary map layer with its grid metadata.");

  m.def(
      "astar",
      [](const std::vector<std::vector<bool>>& grid, double resolution,
         std::pair<int, int> start, std::pair<int, int> goal) {
        BinaryLayer layer = layer_from_rows(grid, resolution);
        return astar(layer, Cell{start.first, start.second},
                     Cell{goal.first, goal.second});
      },
      py::arg("grid"), py::arg("resolution"), py::arg("start"),
      py::arg("goal"),
      "Shortest 8-connected path length in meters, or None if unreachable. "
      "Cells are indexed (i, j) = (column, row); rows are grid[j].");

  m.def(
      "morph_close",
      [](const std::vector<std::vector<bool>>& grid, int radius) {
        return rows_from_layer(morph_close(layer_from_rows(grid, 1.0), radius));
      },
      py::arg("grid"), py::arg("radius"),
      "Morphological closure of the true-set with a disc element.");
}
