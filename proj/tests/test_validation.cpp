// Pixel metrics, inflation, A* and the Monte Carlo agreement protocol.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <queue>
#include <random>

#include "navgen/validation.hpp"

using namespace navgen;

namespace {

GridSpec make_spec(int w, int h, double ox = 0.0, double oy = 0.0,
                   double res = 0.1) {
  GridSpec s;
  s.resolution = res;
  s.origin_x = ox;
  s.origin_y = oy;
  s.width = w;
  s.height = h;
  return s;
}

// Plain Dijkstra over the same 8-connected octile-cost graph.
std::optional<double> dijkstra(const BinaryLayer& layer, Cell start,
                               Cell goal) {
  const GridSpec& spec = layer.spec;
  if (!layer.at(goal.i, goal.j)) return std::nullopt;
  const double straight = spec.resolution;
  const double diagonal = spec.resolution * std::sqrt(2.0);
  std::vector<double> dist(spec.cell_count(),
                           std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[spec.index(start.i, start.j)] = 0.0;
  queue.push({0.0, spec.index(start.i, start.j)});
  while (!queue.empty()) {
    auto [d, idx] = queue.top();
    queue.pop();
    if (d > dist[idx]) continue;
    int i = static_cast<int>(idx % spec.width);
    int j = static_cast<int>(idx / spec.width);
    if (i == goal.i && j == goal.j) return d;
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        int ni = i + di, nj = j + dj;
        if (!spec.contains(ni, nj) || !layer.at(ni, nj)) continue;
        double nd = d + ((di != 0 && dj != 0) ? diagonal : straight);
        std::size_t nidx = spec.index(ni, nj);
        if (nd < dist[nidx] - 1e-15) {
          dist[nidx] = nd;
          queue.push({nd, nidx});
        }
      }
    }
  }
  return std::nullopt;
}

BinaryLayer random_grid(const GridSpec& spec, std::mt19937& rng,
                        double p_free) {
  BinaryLayer layer(spec);
  std::bernoulli_distribution coin(p_free);
  for (auto& c : layer.cells) c = coin(rng) ? 1 : 0;
  return layer;
}

}  // namespace

TEST_CASE("pixel_metrics exact cases") {
  GridSpec spec = make_spec(3, 3);
  BinaryLayer truth(spec);
  // hand-built confusion: TP=4, FP=1, FN=2, TN=2
  //   truth true: (0,0),(1,0),(2,0),(0,1),(1,1),(2,1)
  for (int k = 0; k < 6; ++k) truth.set(k % 3, k / 3, true);
  BinaryLayer pred(spec);
  pred.set(0, 0, true);
  pred.set(1, 0, true);
  pred.set(2, 0, true);
  pred.set(0, 1, true);  // 4 TP
  pred.set(0, 2, true);  // 1 FP
  PixelMetrics m = pixel_metrics(pred, truth);
  CHECK(m.tp == 4);
  CHECK(m.fp == 1);
  CHECK(m.fn == 2);
  CHECK(m.tn == 2);
  CHECK(m.precision == doctest::Approx(0.8));
  CHECK(m.recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.accuracy == doctest::Approx(6.0 / 9.0));

  PixelMetrics perfect = pixel_metrics(truth, truth);
  CHECK(perfect.accuracy == doctest::Approx(1.0));
  BinaryLayer inverted(spec);
  for (std::size_t k = 0; k < truth.cells.size(); ++k) {
    inverted.cells[k] = truth.cells[k] ? 0 : 1;
  }
  CHECK(pixel_metrics(inverted, truth).accuracy == doctest::Approx(0.0));
}

TEST_CASE("pixel_metrics rejects mismatched specs") {
  BinaryLayer a(make_spec(3, 3)), b(make_spec(4, 3));
  CHECK_THROWS_AS(pixel_metrics(a, b), GridSpecMismatch);
}

TEST_CASE("inflate identity, critical corridor width, antitone") {
  GridSpec spec = make_spec(30, 9);
  BinaryLayer corridor(spec);
  for (int i = 0; i < spec.width; ++i) {
    for (int j = 2; j <= 6; ++j) corridor.set(i, j, true);  // 0.5 m wide
  }
  CHECK(inflate(corridor, 0.0).cells == corridor.cells);
  // corridor exactly 2*radius wide is fully erased
  BinaryLayer erased = inflate(corridor, 0.25);
  CHECK(erased.count_true() == 0);
  // a wider margin leaves the centerline
  BinaryLayer survived = inflate(corridor, 0.15);
  CHECK(survived.count_true() > 0);
  for (int i = 2; i < spec.width - 2; ++i) CHECK(survived.at(i, 4));
  // antitone in the radius
  for (std::size_t k = 0; k < corridor.cells.size(); ++k) {
    if (erased.cells[k]) CHECK(survived.cells[k]);
    if (survived.cells[k]) CHECK(corridor.cells[k]);
  }
}

TEST_CASE("astar trivial cases") {
  GridSpec spec = make_spec(11, 1);
  BinaryLayer corridor(spec, true);
  CHECK(*astar(corridor, {3, 0}, {3, 0}) == doctest::Approx(0.0));
  CHECK(*astar(corridor, {0, 0}, {10, 0}) == doctest::Approx(1.0));

  GridSpec sq = make_spec(5, 5);
  BinaryLayer open(sq, true);
  CHECK(*astar(open, {0, 0}, {4, 4}) ==
        doctest::Approx(4.0 * std::sqrt(2.0) * 0.1));
}

TEST_CASE("astar rejects blocked starts and unreachable goals") {
  GridSpec spec = make_spec(5, 5);
  BinaryLayer layer(spec, true);
  layer.set(0, 0, false);
  CHECK_THROWS_AS(astar(layer, {0, 0}, {4, 4}), InvalidStart);
  layer.set(0, 0, true);
  layer.set(4, 4, false);
  CHECK_FALSE(astar(layer, {0, 0}, {4, 4}).has_value());
  // wall the right half off
  BinaryLayer split(spec, true);
  for (int j = 0; j < 5; ++j) split.set(2, j, false);
  CHECK_FALSE(astar(split, {0, 0}, {4, 0}).has_value());
}

TEST_CASE("astar equals Dijkstra on 100 random 20x20 grids") {
  std::mt19937 rng(71);
  GridSpec spec = make_spec(20, 20);
  std::uniform_int_distribution<int> cell(0, 19);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    BinaryLayer grid = random_grid(spec, rng, 0.7);
    Cell start{cell(rng), cell(rng)};
    Cell goal{cell(rng), cell(rng)};
    grid.set(start.i, start.j, true);
    auto a = astar(grid, start, goal);
    auto d = dijkstra(grid, start, goal);
    REQUIRE(a.has_value() == d.has_value());
    if (a) {
      CHECK(*a == doctest::Approx(*d).epsilon(1e-9));
      ++compared;
    }
  }
  CHECK(compared > 20);  // the comparison exercised real paths
}

TEST_CASE("monte_carlo perfect prediction and reproducibility") {
  GridSpec spec = make_spec(25, 25);
  std::mt19937 rng(73);
  BinaryLayer truth(spec, true);
  for (int k = 0; k < 40; ++k) {
    truth.set(5 + k % 12, 4 + k % 15, false);
  }
  ValidationReport same = monte_carlo(truth, truth, 200, 9, 0.1);
  CHECK(same.n == 200);
  CHECK(same.success_agreement == doctest::Approx(1.0));
  CHECK(same.failure_agreement == doctest::Approx(1.0));
  CHECK(same.mean_overlength == doctest::Approx(0.0));
  CHECK(same.truth_successes + same.truth_failures == same.n);

  ValidationReport again = monte_carlo(truth, truth, 200, 9, 0.1);
  REQUIRE(again.tuples.size() == same.tuples.size());
  for (std::size_t k = 0; k < same.tuples.size(); ++k) {
    CHECK(again.tuples[k].start == same.tuples[k].start);
    CHECK(again.tuples[k].goal == same.tuples[k].goal);
    CHECK(again.tuples[k].outcome == same.tuples[k].outcome);
  }
  ValidationReport other = monte_carlo(truth, truth, 200, 10, 0.1);
  bool differs = false;
  for (std::size_t k = 0; k < same.tuples.size(); ++k) {
    if (!(other.tuples[k].start == same.tuples[k].start)) differs = true;
  }
  CHECK(differs);  // the seed actually drives the sampling
}

TEST_CASE("monte_carlo blocked corridor becomes connectivity mismatches") {
  GridSpec spec = make_spec(21, 7);
  BinaryLayer truth(spec);
  // two rooms joined by a one-cell corridor at row 3
  for (int j = 1; j <= 5; ++j) {
    for (int i = 1; i <= 8; ++i) truth.set(i, j, true);
    for (int i = 12; i <= 19; ++i) truth.set(i, j, true);
  }
  for (int i = 9; i <= 11; ++i) truth.set(i, 3, true);
  BinaryLayer pred = truth;
  pred.set(10, 3, false);  // sever the corridor in the prediction

  ValidationReport report = monte_carlo(pred, truth, 400, 5, 0.0);
  CHECK(report.connectivity_mismatches > 0);
  CHECK(report.success_agreement < 1.0);
  for (const auto& tuple : report.tuples) {
    if (tuple.outcome == TupleOutcome::mismatch_connectivity) {
      CHECK(tuple.truth_success != tuple.pred_success);
    }
  }
}

TEST_CASE("monte_carlo overlength is non-negative for subset predictions") {
  GridSpec spec = make_spec(25, 25);
  std::mt19937 rng(79);
  BinaryLayer truth(spec, true);
  BinaryLayer pred = truth;
  std::uniform_int_distribution<int> cell(0, 24);
  for (int k = 0; k < 60; ++k) pred.set(cell(rng), cell(rng), false);

  ValidationReport report = monte_carlo(pred, truth, 300, 11, 0.0);
  for (const auto& tuple : report.tuples) {
    if (tuple.outcome == TupleOutcome::matched_success) {
      CHECK(tuple.overlength >= -1e-9);
    }
  }
  CHECK(report.mean_overlength >= 0.0);
}

TEST_CASE("monte_carlo requires free space after inflation") {
  GridSpec spec = make_spec(6, 6);
  BinaryLayer truth(spec, true);
  BinaryLayer pred(spec, true);
  CHECK_THROWS_AS(monte_carlo(pred, truth, 10, 1, 5.0), EmptyFreeSpace);
}

TEST_CASE("intersect_specs and crop extract the shared window") {
  GridSpec a = make_spec(30, 20, 0.0, 0.0);
  GridSpec b = make_spec(25, 25, 0.5, -0.3);
  GridSpec common = intersect_specs(a, b);
  CHECK(common.origin_x == doctest::Approx(0.5));
  CHECK(common.origin_y == doctest::Approx(0.0));
  CHECK(common.width == 25);
  CHECK(common.height == 20);

  std::mt19937 rng(83);
  BinaryLayer layer(a);
  std::bernoulli_distribution coin(0.5);
  for (auto& c : layer.cells) c = coin(rng) ? 1 : 0;
  BinaryLayer sub = crop(layer, common);
  CHECK(sub.spec == common);
  for (int j = 0; j < common.height; ++j) {
    for (int i = 0; i < common.width; ++i) {
      CHECK(sub.at(i, j) == layer.at(i + 5, j));
    }
  }
}

TEST_CASE("intersect_specs rejects incompatible grids") {
  GridSpec a = make_spec(10, 10, 0.0, 0.0, 0.1);
  GridSpec res = make_spec(10, 10, 0.0, 0.0, 0.2);
  CHECK_THROWS_AS(intersect_specs(a, res), GridSpecMismatch);
  GridSpec off = make_spec(10, 10, 0.03, 0.0, 0.1);  // off-lattice origin
  CHECK_THROWS_AS(intersect_specs(a, off), GridSpecMismatch);
  GridSpec disjoint = make_spec(10, 10, 5.0, 5.0, 0.1);
  CHECK_THROWS_AS(intersect_specs(a, disjoint), GridSpecMismatch);
}
