// Spatial index, PCA normals, slopes and clustering.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "navgen/geometry.hpp"

using namespace navgen;

namespace {

PointCloud random_cloud(std::size_t n, std::mt19937& rng, double span = 5.0) {
  std::uniform_real_distribution<double> u(-span, span);
  PointCloud cloud;
  for (std::size_t k = 0; k < n; ++k) {
    cloud.points.push_back({u(rng), u(rng), u(rng)});
  }
  return cloud;
}

// Reference neighborhood normal: covariance eigen-decomposition over a
// linear-scan closed ball, same sign convention as the library.
std::optional<Eigen::Vector3d> brute_normal(const Point3& p,
                                            const PointCloud& cloud, double r) {
  std::vector<Point3> nb;
  for (const auto& q : cloud.points) {
    if ((q - p).norm() <= r) nb.push_back(q);
  }
  if (nb.size() < 3) return std::nullopt;
  Point3 mean = Point3::Zero();
  for (const auto& q : nb) mean += q;
  mean /= static_cast<double>(nb.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& q : nb) {
    Point3 d = q - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(nb.size());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  if (es.eigenvalues()(1) < 1e-12) return std::nullopt;  // collinear
  Eigen::Vector3d n = es.eigenvectors().col(0).normalized();
  for (int d = 0; d < 3; ++d) {
    if (std::abs(n(d)) > 1e-12) {
      if (n(d) < 0) n = -n;
      break;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("kd-tree radius query matches a linear scan") {
  std::mt19937 rng(11);
  PointCloud cloud = random_cloud(1000, rng);
  KdTree3 tree = build_index3(cloud);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    Point3 q(u(rng), u(rng), u(rng));
    double r = 0.3 + 0.2 * (trial % 7);
    std::vector<int> want;
    for (int k = 0; k < static_cast<int>(cloud.size()); ++k) {
      if ((cloud.points[k] - q).norm() <= r) want.push_back(k);
    }
    auto got = tree.radius({q.x(), q.y(), q.z()}, r);
    CHECK(got == want);
  }
}

TEST_CASE("2D kd-tree radius query matches a linear scan") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<Eigen::Vector2d> pts;
  for (int k = 0; k < 500; ++k) pts.push_back({u(rng), u(rng)});
  KdTree2 tree = build_index2(pts);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::Vector2d q(u(rng), u(rng));
    double r = 0.4;
    std::vector<int> want;
    for (int k = 0; k < static_cast<int>(pts.size()); ++k) {
      if ((pts[k] - q).norm() <= r) want.push_back(k);
    }
    CHECK(tree.radius({q.x(), q.y()}, r) == want);
  }
}

TEST_CASE("pca_normal of a horizontal plane is vertical") {
  PointCloud cloud;
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      cloud.points.push_back({0.1 * i, 0.1 * j, 2.0});
    }
  }
  KdTree3 tree = build_index3(cloud);
  auto n = pca_normal({0, 0, 2.0}, tree, 0.5);
  REQUIRE(n.has_value());
  CHECK(std::abs(n->z()) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(slope_angle(*n) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("pca_normal of a 45 degree plane") {
  PointCloud cloud;
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      // plane z = x: normal direction (-1, 0, 1)/sqrt(2)
      cloud.points.push_back({0.1 * i, 0.1 * j, 0.1 * i});
    }
  }
  KdTree3 tree = build_index3(cloud);
  auto n = pca_normal({0, 0, 0}, tree, 0.6);
  REQUIRE(n.has_value());
  CHECK(slope_angle(*n) == doctest::Approx(M_PI / 4).epsilon(1e-9));
}

TEST_CASE("pca_normal matches the reference eigen-decomposition") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  PointCloud cloud;
  for (int k = 0; k < 300; ++k) {
    // a noisy tilted sheet plus scattered outliers
    double x = u(rng), y = u(rng);
    double z = 0.3 * x - 0.2 * y + 0.02 * u(rng);
    cloud.points.push_back({x, y, z});
  }
  for (int k = 0; k < 40; ++k) {
    cloud.points.push_back({u(rng), u(rng), u(rng)});
  }
  KdTree3 tree = build_index3(cloud);
  for (int k = 0; k < 60; ++k) {
    const Point3& p = cloud.points[k * 5];
    auto got = pca_normal(p, tree, 0.4);
    auto want = brute_normal(p, cloud, 0.4);
    REQUIRE(got.has_value() == want.has_value());
    if (got) {
      CHECK((*got - *want).norm() < 1e-6);
      CHECK(std::abs(got->norm() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("pca_normal needs three non-collinear points") {
  PointCloud cloud;
  cloud.points = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  KdTree3 tree = build_index3(cloud);
  CHECK_FALSE(pca_normal({1, 0, 0}, tree, 10.0).has_value());  // collinear
  PointCloud two;
  two.points = {{0, 0, 0}, {1, 0, 0}};
  KdTree3 tree2 = build_index3(two);
  CHECK_FALSE(pca_normal({0, 0, 0}, tree2, 10.0).has_value());
}

TEST_CASE("slope_angle folds the two normal signs together") {
  Eigen::Vector3d n(0.0, std::sin(0.3), std::cos(0.3));
  CHECK(slope_angle(n) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(slope_angle(-n) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(slope_angle(Eigen::Vector3d(1, 0, 0)) ==
        doctest::Approx(M_PI / 2).epsilon(1e-12));
  CHECK(slope_angle(Eigen::Vector3d(0, 0, -1)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("slope_angle rejects non-unit normals") {
  CHECK_THROWS_AS(slope_angle(Eigen::Vector3d(0, 0, 2)), NonUnitNormal);
  CHECK_THROWS_AS(slope_angle(Eigen::Vector3d::Zero()), NonUnitNormal);
}

TEST_CASE("pca_eigen2d eigenvalue ratio is scale invariant") {
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  std::vector<Eigen::Vector2d> pts;
  for (int k = 0; k < 50; ++k) {
    pts.push_back({0.01 * k, 0.3 * 0.01 * k + 0.01 * u(rng)});
  }
  KdTree2 tree = build_index2(pts);
  auto base = pca_eigen2d(pts[25], tree, 0.3);
  REQUIRE(base.has_value());
  CHECK(base->first >= base->second);
  CHECK(base->second >= 0.0);

  for (double s : {2.0, 5.0, 17.0}) {
    std::vector<Eigen::Vector2d> scaled;
    for (const auto& p : pts) scaled.push_back(s * p);
    KdTree2 stree = build_index2(scaled);
    auto sc = pca_eigen2d(scaled[25], stree, 0.3 * s);
    REQUIRE(sc.has_value());
    CHECK(sc->first / sc->second ==
          doctest::Approx(base->first / base->second).epsilon(1e-6));
  }
}

TEST_CASE("pca_eigen2d needs at least three neighbors") {
  std::vector<Eigen::Vector2d> pts = {{0, 0}, {1, 1}};
  KdTree2 tree = build_index2(pts);
  CHECK_FALSE(pca_eigen2d({0, 0}, tree, 5.0).has_value());
}

TEST_CASE("euclidean_cluster separates distant groups and drops dust") {
  PointCloud cloud;
  // group A: 4 points, pairwise within 0.15
  cloud.points = {{0, 0, 0}, {0.1, 0, 0}, {0.1, 0.1, 0}, {0, 0.1, 0},
                  // group B: 3 points, 5 m away
                  {5, 0, 0}, {5.1, 0, 0}, {5, 0.1, 0},
                  // dust: single far point
                  {20, 20, 0}};
  auto clusters = euclidean_cluster(cloud, 0.2, 2);
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0] == std::vector<int>{0, 1, 2, 3});
  CHECK(clusters[1] == std::vector<int>{4, 5, 6});
  auto with_dust = euclidean_cluster(cloud, 0.2, 1);
  CHECK(with_dust.size() == 3);
}

TEST_CASE("euclidean_cluster result is invariant to input order") {
  std::mt19937 rng(44);
  PointCloud cloud = random_cloud(120, rng, 2.0);
  auto base = euclidean_cluster(cloud, 0.5, 3);
  // shuffle, recluster, map indices back
  std::vector<int> perm(cloud.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  PointCloud shuffled;
  for (int idx : perm) shuffled.points.push_back(cloud.points[idx]);
  auto other = euclidean_cluster(shuffled, 0.5, 3);
  auto canon = [](std::vector<std::vector<int>> cl,
                  const std::vector<int>* map) {
    std::vector<std::vector<int>> out;
    for (auto& c : cl) {
      if (map) {
        for (auto& idx : c) idx = (*map)[idx];
      }
      std::sort(c.begin(), c.end());
      out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(canon(base, nullptr) == canon(other, &perm));
}
