#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <vector>

namespace navgen {

/// Static kd-tree over Dim-dimensional points with closed-ball radius
/// queries. Built once, immutable afterwards; safe to query concurrently.
template <int Dim>
class KdTree {
 public:
  using PointT = std::array<double, Dim>;

  KdTree() = default;
  explicit KdTree(std::vector<PointT> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!order_.empty()) build(0, order_.size(), 0);
  }

  std::size_t size() const { return points_.size(); }
  const PointT& point(int idx) const { return points_[idx]; }

  /// Indices of all points with |p - q| <= r (closed ball), ascending.
  std::vector<int> radius(const PointT& q, double r) const {
    std::vector<int> out;
    if (!order_.empty()) query(0, order_.size(), 0, q, r * r, out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void build(std::size_t lo, std::size_t hi, int axis) {
    if (hi - lo <= 1) return;
    std::size_t mid = (lo + hi) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid,
                     order_.begin() + hi, [&](int a, int b) {
                       return points_[a][axis] < points_[b][axis];
                     });
    int next = (axis + 1) % Dim;
    build(lo, mid, next);
    build(mid + 1, hi, next);
  }

  void query(std::size_t lo, std::size_t hi, int axis, const PointT& q,
             double r2, std::vector<int>& out) const {
    if (lo >= hi) return;
    std::size_t mid = (lo + hi) / 2;
    const PointT& p = points_[order_[mid]];
    double d2 = 0.0;
    for (int d = 0; d < Dim; ++d) {
      double dd = p[d] - q[d];
      d2 += dd * dd;
    }
    if (d2 <= r2) out.push_back(order_[mid]);
    double delta = q[axis] - p[axis];
    int next = (axis + 1) % Dim;
    if (delta <= 0.0 || delta * delta <= r2) query(lo, mid, next, q, r2, out);
    if (delta >= 0.0 || delta * delta <= r2) query(mid + 1, hi, next, q, r2, out);
  }

  std::vector<PointT> points_;
  std::vector<int> order_;
};

using KdTree2 = KdTree<2>;
using KdTree3 = KdTree<3>;

}  // namespace navgen
