#include "navgen/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <random>

#include "navgen/errors.hpp"
#include "navgen/morphology.hpp"

namespace navgen {

PixelMetrics pixel_metrics(const BinaryLayer& pred, const BinaryLayer& truth) {
  if (!(pred.spec == truth.spec)) {
    throw GridSpecMismatch("pixel_metrics requires identical grid specs");
  }
  PixelMetrics m;
  for (std::size_t k = 0; k < pred.cells.size(); ++k) {
    const bool p = pred.cells[k] != 0;
    const bool t = truth.cells[k] != 0;
    if (p && t) ++m.tp;
    else if (p && !t) ++m.fp;
    else if (!p && t) ++m.fn;
    else ++m.tn;
  }
  const double total = static_cast<double>(pred.cells.size());
  m.accuracy = total > 0 ? (m.tp + m.tn) / total : 0.0;
  m.precision = (m.tp + m.fp) > 0 ? double(m.tp) / (m.tp + m.fp) : 0.0;
  m.recall = (m.tp + m.fn) > 0 ? double(m.tp) / (m.tp + m.fn) : 0.0;
  m.f1 = (m.precision + m.recall) > 0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

namespace {

// Lattice offset of b's origin relative to a's, in whole cells.
std::optional<std::pair<int, int>> cell_offset(const GridSpec& a,
                                               const GridSpec& b) {
  const double di = (b.origin_x - a.origin_x) / a.resolution;
  const double dj = (b.origin_y - a.origin_y) / a.resolution;
  const double ri = std::round(di);
  const double rj = std::round(dj);
  if (std::abs(di - ri) > 1e-6 || std::abs(dj - rj) > 1e-6) return std::nullopt;
  return std::make_pair(int(ri), int(rj));
}

}  // namespace

GridSpec intersect_specs(const GridSpec& a, const GridSpec& b) {
  if (a.resolution != b.resolution) {
    throw GridSpecMismatch("grid resolutions differ");
  }
  const auto off = cell_offset(a, b);
  if (!off) throw GridSpecMismatch("grid origins are not on a common lattice");
  const int i0 = std::max(0, off->first);
  const int j0 = std::max(0, off->second);
  const int i1 = std::min(a.width, off->first + b.width);
  const int j1 = std::min(a.height, off->second + b.height);
  if (i0 >= i1 || j0 >= j1) throw GridSpecMismatch("grids do not overlap");
  GridSpec out;
  out.resolution = a.resolution;
  out.origin_x = a.origin_x + i0 * a.resolution;
  out.origin_y = a.origin_y + j0 * a.resolution;
  out.width = i1 - i0;
  out.height = j1 - j0;
  return out;
}

BinaryLayer crop(const BinaryLayer& layer, const GridSpec& target) {
  if (layer.spec.resolution != target.resolution) {
    throw GridSpecMismatch("crop target resolution differs");
  }
  const auto off = cell_offset(layer.spec, target);
  if (!off) throw GridSpecMismatch("crop target is off-lattice");
  if (off->first < 0 || off->second < 0 ||
      off->first + target.width > layer.spec.width ||
      off->second + target.height > layer.spec.height) {
    throw GridSpecMismatch("crop target extends outside the layer");
  }
  BinaryLayer out(target);
  for (int j = 0; j < target.height; ++j) {
    for (int i = 0; i < target.width; ++i) {
      out.set(i, j, layer.at(i + off->first, j + off->second));
    }
  }
  return out;
}

BinaryLayer inflate(const BinaryLayer& layer, double robot_radius) {
  if (robot_radius <= 0.0) return layer;
  const GridSpec& spec = layer.spec;
  // A cell survives iff the robot disc centered there stays on true cells.
  // Cell squares have inradius half a resolution, hence the +0.5 margin: a
  // corridor exactly two radii wide erodes away completely.
  const double reach = robot_radius / spec.resolution + 0.5 + 1e-9;
  const int r = static_cast<int>(std::floor(reach));
  std::vector<std::pair<int, int>> offsets;
  for (int dj = -r; dj <= r; ++dj) {
    for (int di = -r; di <= r; ++di) {
      if (di * di + dj * dj <= reach * reach) offsets.emplace_back(di, dj);
    }
  }
  BinaryLayer out(spec);
  for (int j = 0; j < spec.height; ++j) {
    for (int i = 0; i < spec.width; ++i) {
      if (!layer.at(i, j)) continue;
      bool keep = true;
      for (const auto& [di, dj] : offsets) {
        int ni = i + di, nj = j + dj;
        if (!spec.contains(ni, nj) || !layer.at(ni, nj)) {
          keep = false;
          break;
        }
      }
      out.set(i, j, keep);
    }
  }
  return out;
}

namespace {

struct OpenNode {
  double f;
  int i, j;
  bool operator>(const OpenNode& o) const {
    if (f != o.f) return f > o.f;
    if (i != o.i) return i > o.i;
    return j > o.j;
  }
};

}  // namespace

std::optional<double> astar(const BinaryLayer& layer, Cell start, Cell goal) {
  const GridSpec& spec = layer.spec;
  if (!spec.contains(start.i, start.j) || !layer.at(start.i, start.j)) {
    throw InvalidStart("start cell is not traversable");
  }
  if (!spec.contains(goal.i, goal.j) || !layer.at(goal.i, goal.j)) {
    return std::nullopt;
  }
  if (start == goal) return 0.0;

  const double l = spec.resolution;
  const double diag = l * std::sqrt(2.0);
  auto heuristic = [&](int i, int j) {
    const double dx = std::abs(i - goal.i);
    const double dy = std::abs(j - goal.j);
    return l * (std::max(dx, dy) + (std::sqrt(2.0) - 1.0) * std::min(dx, dy));
  };

  std::vector<double> dist(spec.cell_count(),
                           std::numeric_limits<double>::infinity());
  std::priority_queue<OpenNode, std::vector<OpenNode>, std::greater<>> open;
  dist[spec.index(start.i, start.j)] = 0.0;
  open.push({heuristic(start.i, start.j), start.i, start.j});

  static const int di[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static const int dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    auto [f, i, j] = open.top();
    open.pop();
    const double g = dist[spec.index(i, j)];
    if (f > g + heuristic(i, j) + 1e-12) continue;  // stale entry
    if (i == goal.i && j == goal.j) return g;
    for (int d = 0; d < 8; ++d) {
      const int ni = i + di[d], nj = j + dj[d];
      if (!spec.contains(ni, nj) || !layer.at(ni, nj)) continue;
      const double step = d < 4 ? l : diag;
      const double ng = g + step;
      if (ng < dist[spec.index(ni, nj)] - 1e-15) {
        dist[spec.index(ni, nj)] = ng;
        open.push({ng + heuristic(ni, nj), ni, nj});
      }
    }
  }
  return std::nullopt;
}

ValidationReport monte_carlo(const BinaryLayer& pred, const BinaryLayer& truth,
                             std::size_t n, uint64_t seed, double robot_radius) {
  if (!(pred.spec == truth.spec)) {
    throw GridSpecMismatch("monte_carlo requires identical grid specs");
  }
  ValidationReport report;
  report.n = n;
  report.pixels = pixel_metrics(pred, truth);

  const BinaryLayer pred_inf = inflate(pred, robot_radius);
  const BinaryLayer truth_inf = inflate(truth, robot_radius);
  const GridSpec& spec = truth.spec;

  std::vector<Cell> free_cells;
  for (int j = 0; j < spec.height; ++j) {
    for (int i = 0; i < spec.width; ++i) {
      if (truth_inf.at(i, j)) free_cells.push_back({i, j});
    }
  }
  if (free_cells.empty()) {
    throw EmptyFreeSpace("truth map has no traversable cell after inflation");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_start(0, free_cells.size() - 1);
  std::uniform_int_distribution<int> pick_i(0, spec.width - 1);
  std::uniform_int_distribution<int> pick_j(0, spec.height - 1);

  double overlength_sum = 0.0;
  std::vector<double> overlengths;
  for (std::size_t k = 0; k < n; ++k) {
    TupleRecord rec;
    rec.start = free_cells[pick_start(rng)];
    rec.goal = {pick_i(rng), pick_j(rng)};

    const auto truth_len = astar(truth_inf, rec.start, rec.goal);
    std::optional<double> pred_len;
    if (pred_inf.at(rec.start.i, rec.start.j)) {
      pred_len = astar(pred_inf, rec.start, rec.goal);
    }
    rec.truth_success = truth_len.has_value();
    rec.pred_success = pred_len.has_value();

    if (rec.truth_success) ++report.truth_successes;
    else ++report.truth_failures;

    if (rec.truth_success && rec.pred_success) {
      rec.outcome = TupleOutcome::matched_success;
      rec.overlength = *pred_len - *truth_len;
      overlength_sum += rec.overlength;
      overlengths.push_back(rec.overlength);
      ++report.matched_successes;
    } else if (!rec.truth_success && !rec.pred_success) {
      rec.outcome = TupleOutcome::matched_failure;
      ++report.matched_failures;
    } else {
      const bool goal_differs = truth_inf.at(rec.goal.i, rec.goal.j) !=
                                pred_inf.at(rec.goal.i, rec.goal.j);
      rec.outcome = goal_differs ? TupleOutcome::mismatch_goal
                                 : TupleOutcome::mismatch_connectivity;
      if (goal_differs) ++report.goal_misclassified;
      else ++report.connectivity_mismatches;
    }
    report.tuples.push_back(rec);
  }

  report.success_agreement =
      report.truth_successes > 0
          ? double(report.matched_successes) / report.truth_successes
          : 1.0;
  report.failure_agreement =
      report.truth_failures > 0
          ? double(report.matched_failures) / report.truth_failures
          : 1.0;
  if (!overlengths.empty()) {
    report.mean_overlength = overlength_sum / overlengths.size();
    report.max_overlength = *std::max_element(overlengths.begin(), overlengths.end());
    const int bins =
        static_cast<int>(std::floor(std::max(report.max_overlength, 0.0) /
                                    report.hist_bin_width)) + 1;
    report.overlength_hist.assign(bins, 0);
    for (double v : overlengths) {
      int b = static_cast<int>(std::floor(std::max(v, 0.0) / report.hist_bin_width));
      b = std::clamp(b, 0, bins - 1);
      ++report.overlength_hist[b];
    }
  }
  return report;
}

void write_report(const ValidationReport& report,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "metrics.txt");
    char buf[256];
    auto line = [&](const char* fmt, auto... args) {
      std::snprintf(buf, sizeof(buf), fmt, args...);
      out << buf << "\n";
    };
    out << "pixel metrics (traversable = positive class)\n";
    line("  accuracy   %.6f", report.pixels.accuracy);
    line("  precision  %.6f", report.pixels.precision);
    line("  recall     %.6f", report.pixels.recall);
    line("  f1         %.6f", report.pixels.f1);
    line("  tp=%zu fp=%zu fn=%zu tn=%zu", report.pixels.tp, report.pixels.fp,
         report.pixels.fn, report.pixels.tn);
    out << "planner agreement (n=" << report.n << ")\n";
    line("  truth successes      %zu", report.truth_successes);
    line("  matched successes    %zu (rate %.6f)", report.matched_successes,
         report.success_agreement);
    line("  truth failures       %zu", report.truth_failures);
    line("  matched failures     %zu (rate %.6f)", report.matched_failures,
         report.failure_agreement);
    line("  goal misclassified   %zu", report.goal_misclassified);
    line("  connectivity issues  %zu", report.connectivity_mismatches);
    line("  mean overlength      %.6f m", report.mean_overlength);
    line("  max overlength       %.6f m", report.max_overlength);
  }
  {
    std::ofstream out(out_dir / "tuples.csv");
    out << "start_i,start_j,goal_i,goal_j,truth_success,pred_success,outcome,"
           "overlength\n";
    const char* names[] = {"matched_success", "matched_failure", "mismatch_goal",
                           "mismatch_connectivity"};
    char buf[256];
    for (const auto& t : report.tuples) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%d,%s,%.17g\n", t.start.i,
                    t.start.j, t.goal.i, t.goal.j, t.truth_success ? 1 : 0,
                    t.pred_success ? 1 : 0,
                    names[static_cast<int>(t.outcome)], t.overlength);
      out << buf;
    }
  }
  {
    std::ofstream out(out_dir / "overlength_hist.csv");
    out << "bin_start_m,bin_end_m,count\n";
    char buf[128];
    for (std::size_t b = 0; b < report.overlength_hist.size(); ++b) {
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%zu\n",
                    b * report.hist_bin_width, (b + 1) * report.hist_bin_width,
                    report.overlength_hist[b]);
      out << buf;
    }
  }
}

}  // namespace navgen
