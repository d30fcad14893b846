#include "lazysp/grid_worlds.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace lazysp {

ObstacleKind parse_obstacle_kind(const std::string& name) {
  if (name == "onewall") return ObstacleKind::kOneWall;
  if (name == "twowall") return ObstacleKind::kTwoWall;
  if (name == "forest") return ObstacleKind::kForest;
  if (name == "gate") return ObstacleKind::kGate;
  throw DistributionError("unknown obstacle kind '" + name + "' (expected onewall, twowall, forest, gate)");
}

std::string to_string(ObstacleKind kind) {
  switch (kind) {
    case ObstacleKind::kOneWall: return "onewall";
    case ObstacleKind::kTwoWall: return "twowall";
    case ObstacleKind::kForest: return "forest";
    case ObstacleKind::kGate: return "gate";
  }
  return "?";
}

ExplicitGraph grid_graph(int width, int height) {
  if (width < 3 || height < 3) throw DistributionError("grid dimensions must be at least 3x3");
  std::vector<VertexId> vertices;
  for (int i = 0; i < width * height; ++i) vertices.push_back(i);
  std::vector<Edge> edges;
  auto id = [width](int x, int y) { return static_cast<VertexId>(y * width + x); };
  const double diag = std::sqrt(2.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x + 1 < width) edges.push_back({edges.size(), id(x, y), id(x + 1, y), 1.0});
      if (y + 1 < height) edges.push_back({edges.size(), id(x, y), id(x, y + 1), 1.0});
      if (x + 1 < width && y + 1 < height) edges.push_back({edges.size(), id(x, y), id(x + 1, y + 1), diag});
      if (x > 0 && y + 1 < height) edges.push_back({edges.size(), id(x, y), id(x - 1, y + 1), diag});
    }
  }
  return ExplicitGraph(std::move(vertices), std::move(edges), id(0, height / 2), id(width - 1, height / 2));
}

int wall_column(const GridSpec& spec, double position) {
  const int c = static_cast<int>(std::lround(position * (spec.width - 1) - 0.5));
  return std::clamp(c, 0, spec.width - 2);
}

namespace {

struct Point {
  double x, y;
};

struct Rect {
  double x0, y0, x1, y1;
};

struct Disc {
  Point c;
  double r;
};

// Liang-Barsky clip; touching the boundary counts as intersecting.
bool segment_hits_rect(Point a, Point b, const Rect& r) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - r.x0, r.x1 - a.x, a.y - r.y0, r.y1 - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0)
      t0 = std::max(t0, t);
    else
      t1 = std::min(t1, t);
    if (t0 > t1) return false;
  }
  return true;
}

bool segment_hits_disc(Point a, Point b, const Disc& d) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = ((d.c.x - a.x) * dx + (d.c.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  const double px = a.x + t * dx - d.c.x, py = a.y + t * dy - d.c.y;
  return px * px + py * py <= d.r * d.r;
}

// A vertical wall between columns `col` and `col + 1`, open on the listed row
// intervals [lo, hi] (inclusive rows).
void add_wall(std::vector<Rect>& rects, const GridSpec& spec, int col,
              std::vector<std::pair<int, int>> openings) {
  std::sort(openings.begin(), openings.end());
  const double x = col + 0.5;
  const double t = spec.wall_thickness / 2.0;
  double y = -1.0;
  for (auto [lo, hi] : openings) {
    const double top = lo - 0.5;
    if (top > y) rects.push_back({x - t, y, x + t, top});
    y = std::max(y, hi + 0.5);
  }
  if (y < spec.height) rects.push_back({x - t, y, x + t, static_cast<double>(spec.height)});
}

World rasterize(const ExplicitGraph& graph, int width, const std::vector<Rect>& rects, const std::vector<Disc>& discs) {
  World world(graph.edge_count());
  auto point = [width](VertexId v) {
    return Point{static_cast<double>(v % width), static_cast<double>(v / width)};
  };
  for (const Edge& e : graph.edges()) {
    const Point a = point(e.u), b = point(e.v);
    bool hit = false;
    for (const Rect& r : rects) hit = hit || segment_hits_rect(a, b, r);
    for (const Disc& d : discs) hit = hit || segment_hits_disc(a, b, d);
    if (hit) world.set(e.id, false);
  }
  return world;
}

World draw_once(const ExplicitGraph& graph, const GridSpec& spec, Rng& rng) {
  std::vector<Rect> rects;
  std::vector<Disc> discs;
  const int gap = std::clamp(spec.gap_width, 1, spec.height);
  std::uniform_int_distribution<int> gap_row(0, spec.height - gap);
  switch (spec.kind) {
    case ObstacleKind::kOneWall: {
      const int g = gap_row(rng);
      add_wall(rects, spec, wall_column(spec, spec.wall_position), {{g, g + gap - 1}});
      break;
    }
    case ObstacleKind::kTwoWall: {
      const int g1 = gap_row(rng);
      const int g2 = gap_row(rng);
      add_wall(rects, spec, wall_column(spec, spec.wall_position), {{g1, g1 + gap - 1}});
      add_wall(rects, spec, wall_column(spec, spec.second_wall_position), {{g2, g2 + gap - 1}});
      break;
    }
    case ObstacleKind::kForest: {
      std::uniform_real_distribution<double> cx(1.0, spec.width - 2.0);
      std::uniform_real_distribution<double> cy(0.0, spec.height - 1.0);
      std::uniform_real_distribution<double> rad(spec.radius_min, spec.radius_max);
      for (int i = 0; i < spec.obstacle_count; ++i) {
        const double x = cx(rng);
        const double y = cy(rng);
        discs.push_back({{x, y}, rad(rng)});
      }
      break;
    }
    case ObstacleKind::kGate: {
      std::bernoulli_distribution open(spec.gate_open_prob);
      std::vector<std::pair<int, int>> openings;
      for (int k = 0; k < spec.gate_count; ++k) {
        const int row = static_cast<int>((k + 1) * spec.height / (spec.gate_count + 1));
        if (open(rng)) openings.push_back({row, row + gap - 1});
      }
      add_wall(rects, spec, wall_column(spec, spec.wall_position), openings);
      break;
    }
  }
  return rasterize(graph, spec.width, rects, discs);
}

}  // namespace

World sample_grid_world(const ExplicitGraph& graph, const GridSpec& spec, Rng& rng) {
  for (int attempt = 0; attempt < std::max(1, spec.max_retries); ++attempt) {
    World w = draw_once(graph, spec, rng);
    if (is_feasible(graph, w)) return w;
  }
  throw DistributionError("no feasible " + to_string(spec.kind) + " world after " +
                          std::to_string(spec.max_retries) + " draws");
}

Environment grid_world_generator(const GridSpec& spec, std::uint64_t seed) {
  ExplicitGraph graph = grid_graph(spec.width, spec.height);
  if (spec.kind == ObstacleKind::kForest && spec.radius_max < spec.radius_min)
    throw DistributionError("forest radius_max must be >= radius_min");
  auto shared_graph = std::make_shared<const ExplicitGraph>(graph);
  WorldDistribution::Sampler sampler = [shared_graph, spec](Rng& rng) {
    return sample_grid_world(*shared_graph, spec, rng);
  };
  Rng rng(seed);
  std::vector<World> training;
  training.reserve(spec.training_count);
  for (std::size_t i = 0; i < spec.training_count; ++i) training.push_back(sampler(rng));
  return {std::move(graph), WorldDistribution(std::move(sampler), std::move(training))};
}

}  // namespace lazysp
