#include "navgen/grid.hpp"
#include "navgen/morphology.hpp"
#include "navgen/types.hpp"

#include <algorithm>
#include <cmath>

namespace navgen {

PointCloud transform_cloud(const PointCloud& cloud, const Pose& pose) {
  PointCloud out;
  out.frame = Frame::world;
  out.rings = cloud.rings;
  out.points.reserve(cloud.points.size());
  const Eigen::Matrix3d rot = pose.rotation.toRotationMatrix();
  for (const auto& p : cloud.points) {
    out.points.push_back(rot * p + pose.translation);
  }
  return out;
}

std::optional<std::pair<int, int>> world_to_cell(const GridSpec& spec,
                                                 double x, double y) {
  const int i = static_cast<int>(std::floor((x - spec.origin_x) / spec.resolution));
  const int j = static_cast<int>(std::floor((y - spec.origin_y) / spec.resolution));
  if (!spec.contains(i, j)) return std::nullopt;
  return std::make_pair(i, j);
}

std::size_t BinaryLayer::count_true() const {
  return static_cast<std::size_t>(
      std::count(cells.begin(), cells.end(), uint8_t{1}));
}

namespace {
void check_same_spec(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) {
    throw GridSpecMismatch("layer grid specs differ (resolution, origin or size)");
  }
}
}  // namespace

BinaryLayer layer_and(const std::vector<BinaryLayer>& layers) {
  if (layers.empty()) throw GridSpecMismatch("layer_and needs at least one layer");
  BinaryLayer out = layers.front();
  for (std::size_t n = 1; n < layers.size(); ++n) {
    check_same_spec(out.spec, layers[n].spec);
    for (std::size_t k = 0; k < out.cells.size(); ++k) {
      out.cells[k] = out.cells[k] & layers[n].cells[k];
    }
  }
  return out;
}

BinaryLayer layer_or(const BinaryLayer& a, const BinaryLayer& b) {
  check_same_spec(a.spec, b.spec);
  BinaryLayer out = a;
  for (std::size_t k = 0; k < out.cells.size(); ++k) {
    out.cells[k] = out.cells[k] | b.cells[k];
  }
  return out;
}

std::vector<std::pair<int, int>> disc_offsets(int radius) {
  std::vector<std::pair<int, int>> offs;
  for (int dj = -radius; dj <= radius; ++dj) {
    for (int di = -radius; di <= radius; ++di) {
      if (di * di + dj * dj <= radius * radius) offs.emplace_back(di, dj);
    }
  }
  return offs;
}

namespace {

// Dense row-major buffer with explicit dimensions, used for padded passes.
struct Buf {
  int w = 0, h = 0;
  std::vector<uint8_t> v;
  Buf(int w_, int h_) : w(w_), h(h_), v(static_cast<std::size_t>(w_) * h_, 0) {}
  uint8_t get(int i, int j) const {
    if (i < 0 || i >= w || j < 0 || j >= h) return 0;
    return v[static_cast<std::size_t>(j) * w + i];
  }
  void set(int i, int j, uint8_t x) { v[static_cast<std::size_t>(j) * w + i] = x; }
};

Buf dilate_buf(const Buf& in, const std::vector<std::pair<int, int>>& offs) {
  Buf out(in.w, in.h);
  for (int j = 0; j < in.h; ++j) {
    for (int i = 0; i < in.w; ++i) {
      if (!in.get(i, j)) continue;
      for (auto [di, dj] : offs) {
        int ii = i + di, jj = j + dj;
        if (ii >= 0 && ii < in.w && jj >= 0 && jj < in.h) out.set(ii, jj, 1);
      }
    }
  }
  return out;
}

Buf erode_buf(const Buf& in, const std::vector<std::pair<int, int>>& offs) {
  Buf out(in.w, in.h);
  for (int j = 0; j < in.h; ++j) {
    for (int i = 0; i < in.w; ++i) {
      bool all = true;
      for (auto [di, dj] : offs) {
        if (!in.get(i + di, j + dj)) {
          all = false;
          break;
        }
      }
      out.set(i, j, all ? 1 : 0);
    }
  }
  return out;
}

}  // namespace

BinaryLayer dilate(const BinaryLayer& layer, int radius) {
  if (radius <= 0) return layer;
  const auto offs = disc_offsets(radius);
  Buf in(layer.spec.width, layer.spec.height);
  in.v = layer.cells;
  Buf out = dilate_buf(in, offs);
  BinaryLayer res(layer.spec);
  res.cells = std::move(out.v);
  return res;
}

BinaryLayer erode(const BinaryLayer& layer, int radius) {
  if (radius <= 0) return layer;
  const auto offs = disc_offsets(radius);
  Buf in(layer.spec.width, layer.spec.height);
  in.v = layer.cells;
  Buf out = erode_buf(in, offs);
  BinaryLayer res(layer.spec);
  res.cells = std::move(out.v);
  return res;
}

BinaryLayer morph_close(const BinaryLayer& layer, int radius) {
  if (radius <= 0) return layer;
  const auto offs = disc_offsets(radius);
  const int pad = radius;
  Buf padded(layer.spec.width + 2 * pad, layer.spec.height + 2 * pad);
  for (int j = 0; j < layer.spec.height; ++j) {
    for (int i = 0; i < layer.spec.width; ++i) {
      if (layer.at(i, j)) padded.set(i + pad, j + pad, 1);
    }
  }
  Buf closed = erode_buf(dilate_buf(padded, offs), offs);
  BinaryLayer res(layer.spec);
  for (int j = 0; j < layer.spec.height; ++j) {
    for (int i = 0; i < layer.spec.width; ++i) {
      res.set(i, j, closed.get(i + pad, j + pad) != 0);
    }
  }
  return res;
}

}  // namespace navgen
