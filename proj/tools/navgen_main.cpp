// Command-line front end: build-map, validate, synth-gen, render.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "navgen/config.hpp"
#include "navgen/dataset_io.hpp"
#include "navgen/errors.hpp"
#include "navgen/map_io.hpp"
#include "navgen/pipeline.hpp"
#include "navgen/synth.hpp"
#include "navgen/validation.hpp"

namespace fs = std::filesystem;

namespace {

int run_build_map(const std::string& dataset_dir, const std::string& config_path,
                  const std::string& out_dir) {
  navgen::PipelineConfig config;
  if (!config_path.empty()) {
    config = navgen::PipelineConfig::from_file(config_path);
  }
  const navgen::Dataset dataset = navgen::load_dataset(dataset_dir);
  const navgen::MapBundle bundle =
      navgen::build_map(dataset, config, &std::cerr);
  navgen::write_map_outputs(bundle, config, out_dir);
  std::cout << "wrote maps to " << out_dir << "\n";
  return 0;
}

int run_validate(const std::string& pred_dir, const std::string& truth_dir,
                 const std::string& out_dir, std::size_t n, uint64_t seed,
                 double robot_radius) {
  navgen::BinaryLayer pred =
      navgen::read_binary_map(fs::path(pred_dir) / "fused.pgm");
  navgen::BinaryLayer truth =
      navgen::read_binary_map(fs::path(truth_dir) / "fused.pgm");
  if (!(pred.spec == truth.spec)) {
    // Maps built from data typically overhang the surveyed extent by a
    // border of cells; compare on the common window.
    const navgen::GridSpec common =
        navgen::intersect_specs(pred.spec, truth.spec);
    pred = navgen::crop(pred, common);
    truth = navgen::crop(truth, common);
  }
  const navgen::ValidationReport report =
      navgen::monte_carlo(pred, truth, n, seed, robot_radius);
  navgen::write_report(report, out_dir);
  std::cout << "accuracy " << report.pixels.accuracy << ", success agreement "
            << report.success_agreement << ", failure agreement "
            << report.failure_agreement << "\n";
  return 0;
}

int run_synth_gen(const std::string& scene, const std::string& out_dir,
                  uint64_t seed, double spacing) {
  const navgen::SceneSpec spec = navgen::scene_preset(scene);
  navgen::LidarModel lidar;
  navgen::generate_dataset(spec, lidar, spacing, seed, out_dir);
  std::cout << "wrote dataset and truth to " << out_dir << "\n";
  return 0;
}

int run_render(const std::string& out_dir) {
  const fs::path dir(out_dir);
  const navgen::BinaryLayer fused = navgen::read_binary_map(dir / "fused.pgm");
  const navgen::BinaryLayer positive =
      navgen::read_binary_map(dir / "positive.pgm");
  const navgen::BinaryLayer negative =
      navgen::read_binary_map(dir / "negative.pgm");
  const navgen::BinaryLayer traversable =
      navgen::read_binary_map(dir / "traversable.pgm");
  const navgen::BinaryLayer explored =
      navgen::read_binary_map(dir / "explored.pgm");

  std::ofstream out(dir / "fused_render.ppm", std::ios::binary);
  out << "P6\n";
  out << "# fused map, colored by the first layer vetoing each cell:\n";
  out << "# white=traversable red=positive_obstacle blue=negative_obstacle\n";
  out << "# orange=untraversable_terrain gray=unexplored\n";
  out << fused.spec.width << " " << fused.spec.height << "\n255\n";
  for (int j = 0; j < fused.spec.height; ++j) {
    for (int i = 0; i < fused.spec.width; ++i) {
      uint8_t rgb[3] = {230, 230, 230};  // traversable
      if (!fused.at(i, j)) {
        if (!positive.at(i, j)) {
          rgb[0] = 200; rgb[1] = 30; rgb[2] = 30;
        } else if (!negative.at(i, j)) {
          rgb[0] = 40; rgb[1] = 70; rgb[2] = 200;
        } else if (!traversable.at(i, j)) {
          rgb[0] = 235; rgb[1] = 150; rgb[2] = 30;
        } else {
          rgb[0] = 90; rgb[1] = 90; rgb[2] = 90;  // unexplored
        }
      }
      out.write(reinterpret_cast<const char*>(rgb), 3);
    }
  }
  std::cout << "wrote " << (dir / "fused_render.ppm").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LiDAR scan + trajectory -> fused 2D navigation map"};
  app.require_subcommand(1);

  std::string dataset_dir, config_path, out_dir = "out";
  auto* build = app.add_subcommand("build-map", "run the mapping pipeline");
  build->add_option("dataset", dataset_dir, "dataset directory")->required();
  build->add_option("--config", config_path, "pipeline config file");
  build->add_option("--out", out_dir, "output directory");

  std::string pred_dir, truth_dir;
  std::size_t n = 1000;
  uint64_t seed = 1;
  double robot_radius = 0.3;
  auto* validate = app.add_subcommand("validate", "compare maps and plans");
  validate->add_option("pred", pred_dir, "predicted map directory")->required();
  validate->add_option("truth", truth_dir, "ground-truth map directory")
      ->required();
  validate->add_option("--out", out_dir, "report directory");
  validate->add_option("--n", n, "number of start-goal tuples");
  validate->add_option("--seed", seed, "random seed");
  validate->add_option("--radius", robot_radius, "robot radius for inflation");

  std::string scene;
  double spacing = 0.25;
  auto* synth = app.add_subcommand("synth-gen", "generate a synthetic dataset");
  synth
      ->add_option("scene", scene,
                   "scene preset: curb | plaza | two_level")
      ->required();
  synth->add_option("--out", out_dir, "output directory");
  synth->add_option("--seed", seed, "random seed");
  synth->add_option("--spacing", spacing, "pose spacing along the path, m");

  std::string render_dir;
  auto* render = app.add_subcommand("render", "composite PPM of a map set");
  render->add_option("dir", render_dir, "build-map output directory")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return run_build_map(dataset_dir, config_path, out_dir);
    if (validate->parsed()) {
      return run_validate(pred_dir, truth_dir, out_dir, n, seed, robot_radius);
    }
    if (synth->parsed()) return run_synth_gen(scene, out_dir, seed, spacing);
    if (render->parsed()) return run_render(render_dir);
  } catch (const navgen::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
