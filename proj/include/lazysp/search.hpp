#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lazysp/graph.hpp"
#include "lazysp/state.hpp"
#include "lazysp/worlds.hpp"

namespace lazysp {

/// Raised when the start is disconnected from the goal in E \ E_invalid.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a selector returns an edge that is not an unevaluated edge of
/// the current shortest path.
class SelectorContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Everything a selector may look at when choosing the next edge.
struct SelectionContext {
  const ExplicitGraph& graph;
  const SearchState& state;
  const Path& path;
  std::span<const EdgeId> candidates;  // unevaluated edges of `path`, in path order
  std::size_t selection_index;         // selections made earlier in this episode
  Rng& rng;
};

class EdgeSelector {
 public:
  virtual ~EdgeSelector() = default;
  virtual std::string name() const = 0;
  virtual EdgeId select(const SelectionContext& ctx) = 0;

  /// Probability of each candidate being selected. Deterministic selectors
  /// return a point mass on select(ctx).
  virtual std::vector<std::pair<EdgeId, double>> action_distribution(const SelectionContext& ctx) {
    return {{select(ctx), 1.0}};
  }
};

std::vector<EdgeId> unevaluated_edges(const Path& path, const SearchState& state);

/// Unevaluated edges of the current lazy shortest path, in path order.
/// Throws InfeasibleError when the goal is unreachable.
std::vector<EdgeId> action_set(const ExplicitGraph& graph, const SearchState& state);

/// Deterministic transition: records the world's outcome for `edge`.
SearchState transition(const SearchState& state, EdgeId edge, const World& world);

struct GoalStatus {
  bool goal = false;
  bool infeasible = false;
};

/// Goal iff the lazy shortest path exists and every edge on it is verified valid.
GoalStatus is_goal(const ExplicitGraph& graph, const SearchState& state);

struct Evaluation {
  EdgeId edge = 0;
  bool valid = false;
  double path_length = 0.0;  // length of the lazy shortest path when the edge was selected
};

struct EpisodeResult {
  bool feasible = false;
  std::optional<Path> path;
  std::vector<Evaluation> trace;
  SearchState final_state;

  std::size_t evaluations() const { return trace.size(); }
  int reward() const { return -static_cast<int>(trace.size()); }
};

/// The LazySP loop. Returns the shortest feasible path together with the
/// ordered evaluations; if the world has no feasible path the result is
/// marked infeasible and carries the evaluations spent discovering that.
EpisodeResult run_lazysp(const ExplicitGraph& graph, const World& world, EdgeSelector& selector, Rng& rng);

/// Same, starting from an existing evaluation record.
EpisodeResult run_lazysp_from(const ExplicitGraph& graph, const World& world, EdgeSelector& selector, Rng& rng,
                              SearchState initial);

/// Writes "edge,outcome,path_length" rows.
void write_trace(std::ostream& out, const EpisodeResult& result);

/// Expected number of evaluations of a selector under an exact-support
/// distribution, enumerating worlds and the selector's action distribution.
double expected_evaluations(const ExplicitGraph& graph, std::span<const SupportPoint> support, EdgeSelector& selector);

}  // namespace lazysp
