#include "lazysp/search.hpp"

#include <algorithm>
#include <functional>
#include <ostream>

namespace lazysp {

std::vector<EdgeId> unevaluated_edges(const Path& path, const SearchState& state) {
  std::vector<EdgeId> out;
  for (EdgeId e : path.edges)
    if (!state.is_evaluated(e)) out.push_back(e);
  return out;
}

std::vector<EdgeId> action_set(const ExplicitGraph& graph, const SearchState& state) {
  auto path = shortest_path(graph, state.invalid());
  if (!path) throw InfeasibleError("no feasible path remains: goal unreachable without invalid edges");
  return unevaluated_edges(*path, state);
}

SearchState transition(const SearchState& state, EdgeId edge, const World& world) {
  SearchState next = state;
  next.record(edge, world.is_valid(edge));
  return next;
}

GoalStatus is_goal(const ExplicitGraph& graph, const SearchState& state) {
  auto path = shortest_path(graph, state.invalid());
  if (!path) return {false, true};
  for (EdgeId e : path->edges)
    if (!state.is_valid(e)) return {false, false};
  return {true, false};
}

EpisodeResult run_lazysp_from(const ExplicitGraph& graph, const World& world, EdgeSelector& selector, Rng& rng,
                              SearchState state) {
  if (world.size() != graph.edge_count()) throw ContractError("world size does not match graph");
  EpisodeResult result;
  std::size_t selections = 0;
  for (;;) {
    std::optional<Path> path = shortest_path(graph, state.invalid());
    if (!path) {
      result.feasible = false;
      break;
    }
    const std::vector<EdgeId> candidates = unevaluated_edges(*path, state);
    if (candidates.empty()) {
      result.feasible = true;
      result.path = std::move(path);
      break;
    }
    const SelectionContext ctx{graph, state, *path, candidates, selections, rng};
    const EdgeId chosen = selector.select(ctx);
    if (std::find(candidates.begin(), candidates.end(), chosen) == candidates.end())
      throw SelectorContractError("selector '" + selector.name() + "' returned edge " + std::to_string(chosen) +
                                  ", which is not an unevaluated edge of the current shortest path");
    const bool valid = world.is_valid(chosen);
    state.record(chosen, valid);
    result.trace.push_back({chosen, valid, path->length});
    ++selections;
  }
  result.final_state = std::move(state);
  return result;
}

EpisodeResult run_lazysp(const ExplicitGraph& graph, const World& world, EdgeSelector& selector, Rng& rng) {
  return run_lazysp_from(graph, world, selector, rng, SearchState(graph.edge_count()));
}

void write_trace(std::ostream& out, const EpisodeResult& result) {
  out << "edge,outcome,path_length\n";
  for (const auto& ev : result.trace) out << ev.edge << ',' << (ev.valid ? 1 : 0) << ',' << ev.path_length << '\n';
}

double expected_evaluations(const ExplicitGraph& graph, std::span<const SupportPoint> support, EdgeSelector& selector) {
  Rng rng(0);
  std::function<double(const SearchState&, const World&, std::size_t)> evals = [&](const SearchState& state,
                                                                                  const World& world,
                                                                                  std::size_t depth) -> double {
    std::optional<Path> path = shortest_path(graph, state.invalid());
    if (!path) return 0.0;
    const std::vector<EdgeId> candidates = unevaluated_edges(*path, state);
    if (candidates.empty()) return 0.0;
    const SelectionContext ctx{graph, state, *path, candidates, depth, rng};
    double total = 0.0;
    for (auto [edge, prob] : selector.action_distribution(ctx)) {
      if (prob == 0.0) continue;
      if (std::find(candidates.begin(), candidates.end(), edge) == candidates.end())
        throw SelectorContractError("selector '" + selector.name() + "' proposed an edge off the current path");
      total += prob * (1.0 + evals(transition(state, edge, world), world, depth + 1));
    }
    return total;
  };
  double expected = 0.0;
  for (const auto& point : support)
    if (point.probability > 0.0) expected += point.probability * evals(SearchState(graph.edge_count()), point.world, 0);
  return expected;
}

}  // namespace lazysp
