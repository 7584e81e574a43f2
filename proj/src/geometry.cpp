#include "navgen/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <deque>

namespace navgen {

KdTree3 build_index3(const PointCloud& cloud) {
  std::vector<std::array<double, 3>> pts;
  pts.reserve(cloud.points.size());
  for (const auto& p : cloud.points) pts.push_back({p.x(), p.y(), p.z()});
  return KdTree3(std::move(pts));
}

KdTree2 build_index2(const std::vector<Eigen::Vector2d>& points) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back({p.x(), p.y()});
  return KdTree2(std::move(pts));
}

namespace {

// Flip so the first component above tolerance is positive.
template <typename Vec>
Vec fix_sign(Vec v) {
  for (int d = 0; d < v.size(); ++d) {
    if (std::abs(v[d]) > 1e-12) {
      if (v[d] < 0) v = -v;
      break;
    }
  }
  return v;
}

constexpr double kRankTol = 1e-12;

}  // namespace

std::optional<Eigen::Vector3d> pca_normal(const Point3& p, const KdTree3& index,
                                          double r) {
  const auto nbrs = index.radius({p.x(), p.y(), p.z()}, r);
  std::vector<Point3> pts;
  pts.reserve(nbrs.size() + 1);
  bool contains_p = false;
  for (int idx : nbrs) {
    const auto& q = index.point(idx);
    Point3 v(q[0], q[1], q[2]);
    if ((v - p).squaredNorm() == 0.0) contains_p = true;
    pts.push_back(v);
  }
  if (!contains_p) pts.push_back(p);
  if (pts.size() < 3) return std::nullopt;

  Point3 mean = Point3::Zero();
  for (const auto& q : pts) mean += q;
  mean /= static_cast<double>(pts.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& q : pts) {
    Point3 d = q - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(pts.size());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  // Eigenvalues ascend; a vanishing middle eigenvalue means the points are
  // collinear and no plane is defined.
  if (eig.eigenvalues()[1] < kRankTol) return std::nullopt;
  Eigen::Vector3d n = eig.eigenvectors().col(0);
  n.normalize();
  return fix_sign(n);
}

double slope_angle(const Eigen::Vector3d& n) {
  if (std::abs(n.norm() - 1.0) > 1e-6) {
    throw NonUnitNormal("slope_angle requires a unit normal");
  }
  // fold over the sign of the normal: acos(|z|) is exactly symmetric in +-n
  double c = std::clamp(std::abs(n.z()), 0.0, 1.0);
  return std::acos(c);
}

std::optional<std::pair<double, double>> pca_eigen2d(const Eigen::Vector2d& p,
                                                     const KdTree2& index,
                                                     double r) {
  const auto nbrs = index.radius({p.x(), p.y()}, r);
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(nbrs.size() + 1);
  bool contains_p = false;
  for (int idx : nbrs) {
    const auto& q = index.point(idx);
    Eigen::Vector2d v(q[0], q[1]);
    if ((v - p).squaredNorm() == 0.0) contains_p = true;
    pts.push_back(v);
  }
  if (!contains_p) pts.push_back(p);
  if (pts.size() < 3) return std::nullopt;

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& q : pts) mean += q;
  mean /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& q : pts) {
    Eigen::Vector2d d = q - mean;
    sxx += d.x() * d.x();
    sxy += d.x() * d.y();
    syy += d.y() * d.y();
  }
  const double n = static_cast<double>(pts.size());
  sxx /= n;
  sxy /= n;
  syy /= n;
  // Closed-form symmetric 2x2 eigenvalues.
  const double tr = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  double disc = tr * tr / 4.0 - det;
  if (disc < 0.0) disc = 0.0;
  const double root = std::sqrt(disc);
  double lmax = tr / 2.0 + root;
  double lmin = tr / 2.0 - root;
  if (lmin < 0.0) lmin = 0.0;
  return std::make_pair(lmax, lmin);
}

std::vector<std::vector<int>> euclidean_cluster(const PointCloud& cloud,
                                                double tol,
                                                std::size_t min_size) {
  const KdTree3 index = build_index3(cloud);
  const int n = static_cast<int>(cloud.points.size());
  std::vector<char> visited(n, 0);
  std::vector<std::vector<int>> clusters;
  for (int seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    std::vector<int> members;
    std::deque<int> frontier{seed};
    visited[seed] = 1;
    while (!frontier.empty()) {
      int cur = frontier.front();
      frontier.pop_front();
      members.push_back(cur);
      const auto& p = cloud.points[cur];
      for (int nb : index.radius({p.x(), p.y(), p.z()}, tol)) {
        if (!visited[nb]) {
          visited[nb] = 1;
          frontier.push_back(nb);
        }
      }
    }
    if (members.size() >= min_size) {
      std::sort(members.begin(), members.end());
      clusters.push_back(std::move(members));
    }
  }
  // BFS seeds ascend, so clusters are already ordered by smallest member.
  return clusters;
}

}  // namespace navgen
