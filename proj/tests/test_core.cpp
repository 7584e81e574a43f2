// Core grid types, layer algebra and morphology.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "navgen/grid.hpp"
#include "navgen/morphology.hpp"
#include "navgen/types.hpp"

using namespace navgen;

namespace {

GridSpec make_spec(int w, int h, double res = 0.1) {
  GridSpec s;
  s.resolution = res;
  s.origin_x = 0.0;
  s.origin_y = 0.0;
  s.width = w;
  s.height = h;
  return s;
}

BinaryLayer random_layer(const GridSpec& spec, std::mt19937& rng,
                         double p_true = 0.5) {
  BinaryLayer layer(spec);
  std::bernoulli_distribution coin(p_true);
  for (auto& c : layer.cells) c = coin(rng) ? 1 : 0;
  return layer;
}

// Reference closure: dilation then erosion on a buffer padded by the radius,
// both written as direct double loops over the disc offsets.
BinaryLayer brute_close(const BinaryLayer& layer, int radius) {
  const int w = layer.spec.width, h = layer.spec.height, r = radius;
  const int pw = w + 2 * r, ph = h + 2 * r;
  std::vector<uint8_t> dil(static_cast<std::size_t>(pw) * ph, 0);
  auto in_disc = [&](int di, int dj) { return di * di + dj * dj <= r * r; };
  for (int j = 0; j < ph; ++j) {
    for (int i = 0; i < pw; ++i) {
      bool any = false;
      for (int dj = -r; dj <= r && !any; ++dj) {
        for (int di = -r; di <= r && !any; ++di) {
          if (!in_disc(di, dj)) continue;
          int si = i - r + di, sj = j - r + dj;
          if (si >= 0 && si < w && sj >= 0 && sj < h && layer.at(si, sj)) {
            any = true;
          }
        }
      }
      dil[static_cast<std::size_t>(j) * pw + i] = any ? 1 : 0;
    }
  }
  BinaryLayer out(layer.spec);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      bool all = true;
      for (int dj = -r; dj <= r && all; ++dj) {
        for (int di = -r; di <= r && all; ++di) {
          if (!in_disc(di, dj)) continue;
          int si = i + r + di, sj = j + r + dj;
          if (!dil[static_cast<std::size_t>(sj) * pw + si]) all = false;
        }
      }
      out.set(i, j, all);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("world_to_cell basic binning") {
  GridSpec spec = make_spec(10, 10);
  auto c = world_to_cell(spec, 0.05, 0.05);
  REQUIRE(c.has_value());
  CHECK(c->first == 0);
  CHECK(c->second == 0);
}

TEST_CASE("world_to_cell boundary belongs to the higher cell") {
  GridSpec spec = make_spec(20, 10);
  auto c = world_to_cell(spec, 1.00, 0.00);
  REQUIRE(c.has_value());
  CHECK(c->first == 10);
  CHECK(c->second == 0);
}

TEST_CASE("world_to_cell out of extent is empty") {
  GridSpec spec = make_spec(10, 10);
  CHECK_FALSE(world_to_cell(spec, -0.01, 0.5).has_value());
  CHECK_FALSE(world_to_cell(spec, 0.5, 1.0).has_value());
  CHECK_FALSE(world_to_cell(spec, 1.0, 0.5).has_value());
}

TEST_CASE("world_to_cell inverts cell centers") {
  GridSpec spec = make_spec(17, 13, 0.25);
  spec.origin_x = -1.3;
  spec.origin_y = 2.7;
  for (int j = 0; j < spec.height; ++j) {
    for (int i = 0; i < spec.width; ++i) {
      auto c = world_to_cell(spec, spec.center_x(i), spec.center_y(j));
      REQUIRE(c.has_value());
      CHECK(c->first == i);
      CHECK(c->second == j);
    }
  }
}

TEST_CASE("transform_cloud identity leaves points unchanged") {
  PointCloud cloud;
  cloud.points = {{1, 2, 3}, {-0.5, 0.25, 4}};
  cloud.rings = {0, 7};
  PointCloud out = transform_cloud(cloud, Pose{});
  REQUIRE(out.size() == 2);
  CHECK(out.frame == Frame::world);
  CHECK(out.points[0].isApprox(cloud.points[0]));
  CHECK(out.points[1].isApprox(cloud.points[1]));
  CHECK(out.rings == cloud.rings);
}

TEST_CASE("transform_cloud translation") {
  PointCloud cloud;
  cloud.points = {{0, 0, 0}};
  Pose pose;
  pose.translation = {1, 2, 3};
  PointCloud out = transform_cloud(cloud, pose);
  CHECK(out.points[0].isApprox(Point3(1, 2, 3)));
}

TEST_CASE("transform_cloud 90 degree yaw") {
  PointCloud cloud;
  cloud.points = {{1, 0, 0}};
  Pose pose;
  pose.rotation =
      Eigen::Quaterniond(Eigen::AngleAxisd(M_PI / 2, Eigen::Vector3d::UnitZ()));
  PointCloud out = transform_cloud(cloud, pose);
  CHECK(out.points[0].x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(out.points[0].y() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.points[0].z() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("transform_cloud preserves pairwise distances") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-10, 10);
  PointCloud cloud;
  for (int k = 0; k < 40; ++k) cloud.points.push_back({u(rng), u(rng), u(rng)});
  Pose pose;
  pose.translation = {3.1, -2.2, 0.4};
  pose.rotation = Eigen::Quaterniond(0.3, 0.5, -0.4, 0.7).normalized();
  PointCloud out = transform_cloud(cloud, pose);
  for (std::size_t a = 0; a < cloud.size(); ++a) {
    for (std::size_t b = a + 1; b < cloud.size(); ++b) {
      double before = (cloud.points[a] - cloud.points[b]).norm();
      double after = (out.points[a] - out.points[b]).norm();
      CHECK(std::abs(before - after) < 1e-9);
    }
  }
}

TEST_CASE("disc_offsets radius 1 is the 4-neighborhood plus center") {
  auto offs = disc_offsets(1);
  CHECK(offs.size() == 5);
}

TEST_CASE("morph_close radius 0 is the identity") {
  std::mt19937 rng(1);
  GridSpec spec = make_spec(16, 12);
  BinaryLayer layer = random_layer(spec, rng);
  BinaryLayer out = morph_close(layer, 0);
  CHECK(out.cells == layer.cells);
}

TEST_CASE("morph_close fills a single hole") {
  GridSpec spec = make_spec(9, 9);
  BinaryLayer layer(spec, true);
  layer.set(4, 4, false);
  BinaryLayer out = morph_close(layer, 1);
  CHECK(out.count_true() == spec.cell_count());
}

TEST_CASE("morph_close keeps an isolated true cell") {
  GridSpec spec = make_spec(5, 5);
  BinaryLayer layer(spec);
  layer.set(2, 2, true);
  BinaryLayer out = morph_close(layer, 1);
  CHECK(out.at(2, 2));
}

TEST_CASE("morph_close matches the brute-force padded closure") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    GridSpec spec = make_spec(11 + trial % 5, 9 + trial % 7);
    BinaryLayer layer = random_layer(spec, rng, 0.35);
    for (int radius : {1, 2, 3}) {
      BinaryLayer got = morph_close(layer, radius);
      BinaryLayer want = brute_close(layer, radius);
      CHECK(got.cells == want.cells);
    }
  }
}

TEST_CASE("morph_close is extensive and idempotent") {
  std::mt19937 rng(99);
  GridSpec spec = make_spec(32, 32);
  for (int trial = 0; trial < 20; ++trial) {
    BinaryLayer layer = random_layer(spec, rng, 0.4);
    for (int radius : {1, 2}) {
      BinaryLayer once = morph_close(layer, radius);
      for (std::size_t k = 0; k < layer.cells.size(); ++k) {
        if (layer.cells[k]) CHECK(once.cells[k]);  // never removes true cells
      }
      BinaryLayer twice = morph_close(once, radius);
      CHECK(twice.cells == once.cells);
    }
  }
}

TEST_CASE("layer_and truth table and absorbing element") {
  GridSpec spec = make_spec(6, 4);
  BinaryLayer all_true(spec, true), all_false(spec, false);
  std::mt19937 rng(3);
  BinaryLayer x = random_layer(spec, rng);
  CHECK(layer_and({all_true, all_true}).count_true() == spec.cell_count());
  CHECK(layer_and({x, all_false}).count_true() == 0);
  CHECK(layer_or(x, all_false).cells == x.cells);
  CHECK(layer_and({x, all_true}).cells == x.cells);
}

TEST_CASE("layer_and is associative and commutative") {
  GridSpec spec = make_spec(12, 12);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    BinaryLayer a = random_layer(spec, rng);
    BinaryLayer b = random_layer(spec, rng);
    BinaryLayer c = random_layer(spec, rng);
    BinaryLayer abc = layer_and({a, b, c});
    BinaryLayer cba = layer_and({c, b, a});
    BinaryLayer nested = layer_and({layer_and({a, b}), c});
    CHECK(abc.cells == cba.cells);
    CHECK(abc.cells == nested.cells);
  }
}

TEST_CASE("layer algebra rejects mismatched specs") {
  BinaryLayer a(make_spec(4, 4)), b(make_spec(5, 4));
  CHECK_THROWS_AS(layer_and({a, b}), GridSpecMismatch);
  CHECK_THROWS_AS(layer_or(a, b), GridSpecMismatch);
}
