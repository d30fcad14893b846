#include "lazysp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <string>

namespace lazysp {

namespace {

constexpr double kRelTol = 1e-9;

}  // namespace

bool lengths_equal(double a, double b) {
  return std::fabs(a - b) <= kRelTol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

bool length_at_most(double a, double bound) { return a <= bound + kRelTol * std::max(1.0, std::fabs(bound)); }

std::size_t EdgeSet::size() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

std::vector<EdgeId> EdgeSet::members() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < bits_.size(); ++e)
    if (bits_[e]) out.push_back(e);
  return out;
}

bool Path::contains(EdgeId e) const { return std::find(edges.begin(), edges.end(), e) != edges.end(); }

ExplicitGraph::ExplicitGraph(std::vector<VertexId> vertices, std::vector<Edge> edges, VertexId start, VertexId goal)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), start_(start), goal_(goal) {
  sorted_index_.resize(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) sorted_index_[i] = i;
  std::sort(sorted_index_.begin(), sorted_index_.end(),
            [&](std::size_t a, std::size_t b) { return vertices_[a] < vertices_[b]; });
  for (std::size_t i = 1; i < sorted_index_.size(); ++i)
    if (vertices_[sorted_index_[i]] == vertices_[sorted_index_[i - 1]])
      throw GraphError("duplicate vertex id " + std::to_string(vertices_[sorted_index_[i]]));

  if (start_ == goal_) throw GraphError("start and goal must differ");
  (void)index_of(start_);
  (void)index_of(goal_);

  adjacency_.assign(vertices_.size(), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.id != i) throw GraphError("edge ids must be dense 0..|E|-1; found id " + std::to_string(e.id) + " at " +
                                    std::to_string(i));
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw GraphError("edge " + std::to_string(e.id) + " has non-positive or non-finite length");
    if (e.u == e.v) throw GraphError("edge " + std::to_string(e.id) + " is a self-loop");
    const std::size_t a = index_of(e.u);
    const std::size_t b = index_of(e.v);
    adjacency_[a].push_back({b, e.id});
    adjacency_[b].push_back({a, e.id});
    total_length_ += e.length;
  }
}

std::size_t ExplicitGraph::index_of(VertexId v) const {
  auto it = std::lower_bound(sorted_index_.begin(), sorted_index_.end(), v,
                             [&](std::size_t idx, VertexId value) { return vertices_[idx] < value; });
  if (it == sorted_index_.end() || vertices_[*it] != v) throw GraphError("unknown vertex id " + std::to_string(v));
  return *it;
}

std::optional<EdgeId> ExplicitGraph::find_edge(VertexId a, VertexId b) const {
  const std::size_t ia = index_of(a);
  const std::size_t ib = index_of(b);
  std::optional<EdgeId> best;
  for (const Arc& arc : adjacency_[ia])
    if (arc.to == ib && (!best || arc.edge < *best)) best = arc.edge;
  return best;
}

std::uint64_t ExplicitGraph::hash() const {
  std::string canon;
  char buf[128];
  for (VertexId v : vertices_) {
    std::snprintf(buf, sizeof(buf), "v%lld;", static_cast<long long>(v));
    canon += buf;
  }
  for (const Edge& e : edges_) {
    std::snprintf(buf, sizeof(buf), "e%zu,%lld,%lld,%a;", e.id, static_cast<long long>(e.u),
                  static_cast<long long>(e.v), e.length);
    canon += buf;
  }
  std::snprintf(buf, sizeof(buf), "s%lld;g%lld", static_cast<long long>(start_), static_cast<long long>(goal_));
  canon += buf;

  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<double> distances_to_goal(const ExplicitGraph& graph, const EdgeSet& excluded) {
  std::vector<double> dist(graph.vertex_count(), kInfinity);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  const std::size_t goal = graph.index_of(graph.goal());
  dist[goal] = 0.0;
  open.emplace(0.0, goal);
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    for (const auto& arc : graph.arcs(u)) {
      if (excluded.contains(arc.edge)) continue;
      const double nd = d + graph.edge(arc.edge).length;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        open.emplace(nd, arc.to);
      }
    }
  }
  return dist;
}

std::optional<Path> shortest_path(const ExplicitGraph& graph, const EdgeSet& excluded) {
  const std::vector<double> dist = distances_to_goal(graph, excluded);
  std::size_t u = graph.index_of(graph.start());
  const std::size_t goal = graph.index_of(graph.goal());
  if (!std::isfinite(dist[u])) return std::nullopt;

  // Walk tight arcs from the start, always taking the smallest edge id. Any
  // tight arc extends to an optimal path, so this yields the lexicographically
  // smallest edge sequence among the optima.
  Path path;
  path.vertices.push_back(graph.vertex_at(u));
  while (u != goal) {
    std::optional<EdgeId> best_edge;
    std::size_t best_to = 0;
    for (const auto& arc : graph.arcs(u)) {
      if (excluded.contains(arc.edge) || !std::isfinite(dist[arc.to])) continue;
      const double through = graph.edge(arc.edge).length + dist[arc.to];
      if (!lengths_equal(through, dist[u]) || dist[arc.to] >= dist[u]) continue;
      if (!best_edge || arc.edge < *best_edge) {
        best_edge = arc.edge;
        best_to = arc.to;
      }
    }
    if (!best_edge || path.edges.size() > graph.vertex_count())
      throw GraphError("shortest path reconstruction failed (degenerate edge lengths)");
    path.edges.push_back(*best_edge);
    path.length += graph.edge(*best_edge).length;
    u = best_to;
    path.vertices.push_back(graph.vertex_at(u));
  }
  return path;
}

std::optional<Path> shortest_path(const ExplicitGraph& graph) {
  return shortest_path(graph, EdgeSet(graph.edge_count()));
}

std::vector<Path> enumerate_paths_shorter_than(const ExplicitGraph& graph, double bound, const EdgeSet& excluded,
                                               std::size_t cap) {
  if (!std::isfinite(bound)) throw std::invalid_argument("path enumeration bound must be finite");
  const std::vector<double> dist = distances_to_goal(graph, excluded);
  const std::size_t start = graph.index_of(graph.start());
  const std::size_t goal = graph.index_of(graph.goal());

  std::vector<Path> found;
  std::vector<char> on_path(graph.vertex_count(), 0);
  std::vector<std::size_t> vertex_stack{start};
  std::vector<EdgeId> edge_stack;
  on_path[start] = 1;

  std::function<void(std::size_t, double)> dfs = [&](std::size_t u, double length) {
    if (u == goal) {
      Path p;
      for (std::size_t idx : vertex_stack) p.vertices.push_back(graph.vertex_at(idx));
      p.edges = edge_stack;
      for (EdgeId e : edge_stack) p.length += graph.edge(e).length;
      found.push_back(std::move(p));
      if (found.size() > cap)
        throw PathCapExceeded("more than " + std::to_string(cap) + " paths within bound; graph too large for exact enumeration");
      return;
    }
    for (const auto& arc : graph.arcs(u)) {
      if (excluded.contains(arc.edge) || on_path[arc.to]) continue;
      const double next = length + graph.edge(arc.edge).length;
      if (!length_at_most(next + dist[arc.to], bound)) continue;
      on_path[arc.to] = 1;
      vertex_stack.push_back(arc.to);
      edge_stack.push_back(arc.edge);
      dfs(arc.to, next);
      edge_stack.pop_back();
      vertex_stack.pop_back();
      on_path[arc.to] = 0;
    }
  };
  if (std::isfinite(dist[start])) dfs(start, 0.0);
  return found;
}

}  // namespace lazysp
