#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lazysp {

using VertexId = std::int64_t;
using EdgeId = std::size_t;

struct Edge {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  double length = 0.0;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by path enumeration when the number of paths exceeds the cap.
class PathCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed-size membership set over edge ids.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t edge_count) : bits_(edge_count, false) {}

  std::size_t capacity() const { return bits_.size(); }
  bool contains(EdgeId e) const { return e < bits_.size() && bits_[e]; }
  void insert(EdgeId e) { bits_.at(e) = true; }
  void erase(EdgeId e) { bits_.at(e) = false; }
  std::size_t size() const;
  std::vector<EdgeId> members() const;

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  std::vector<bool> bits_;
};

struct Path {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  double length = 0.0;

  bool contains(EdgeId e) const;
  friend bool operator==(const Path&, const Path&) = default;
};

/// Undirected graph with dense edge ids, positive edge lengths and a fixed
/// start/goal pair. Immutable after construction, so concurrent queries are
/// safe.
class ExplicitGraph {
 public:
  ExplicitGraph(std::vector<VertexId> vertices, std::vector<Edge> edges, VertexId start, VertexId goal);

  std::span<const VertexId> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  VertexId start() const { return start_; }
  VertexId goal() const { return goal_; }

  /// Dense index of a vertex id; throws GraphError for unknown ids.
  std::size_t index_of(VertexId v) const;
  VertexId vertex_at(std::size_t index) const { return vertices_[index]; }

  struct Arc {
    std::size_t to = 0;  // dense vertex index
    EdgeId edge = 0;
  };
  std::span<const Arc> arcs(std::size_t vertex_index) const { return adjacency_[vertex_index]; }

  double total_length() const { return total_length_; }

  /// Returns the edge id joining two vertices, if any (smallest id on multi-edges).
  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

  /// FNV-1a over a canonical serialization; identifies a graph in world-set files.
  std::uint64_t hash() const;

 private:
  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  VertexId start_;
  VertexId goal_;
  std::vector<std::vector<Arc>> adjacency_;
  std::vector<std::size_t> sorted_index_;  // permutation sorting vertices_
  double total_length_ = 0.0;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Shortest start->goal path avoiding `excluded`. Among equal-length optima
/// the lexicographically smallest edge-id sequence is returned.
std::optional<Path> shortest_path(const ExplicitGraph& graph, const EdgeSet& excluded);
std::optional<Path> shortest_path(const ExplicitGraph& graph);

/// Distance from every vertex (dense index) to the goal over non-excluded edges.
std::vector<double> distances_to_goal(const ExplicitGraph& graph, const EdgeSet& excluded);

/// All simple start->goal paths of length <= bound avoiding `excluded`.
/// Throws PathCapExceeded once more than `cap` paths are found.
std::vector<Path> enumerate_paths_shorter_than(const ExplicitGraph& graph, double bound, const EdgeSet& excluded,
                                               std::size_t cap = 100000);

/// Tolerance used when comparing path lengths for equality.
bool lengths_equal(double a, double b);
bool length_at_most(double a, double bound);

}  // namespace lazysp
