#include "lazysp/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

namespace lazysp {

namespace {

using Bits = std::vector<std::uint64_t>;

Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
bool test_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1u; }

std::size_t popcount_and_not(const Bits& a, const Bits& covered) {
  std::size_t n = 0;
  for (std::size_t w = 0; w < a.size(); ++w) n += static_cast<std::size_t>(__builtin_popcountll(a[w] & ~covered[w]));
  return n;
}

}  // namespace

CoverInstance build_cover_instance(const ExplicitGraph& graph, const SearchState& state, const World& world,
                                   const OracleLimits& limits) {
  for (EdgeId e : state.evaluated())
    if (world.is_valid(e) != state.is_valid(e)) throw ContractError("state is inconsistent with the world");
  auto optimal = shortest_path(graph, invalid_edges(world));
  if (!optimal) throw InfeasibleError("world has no feasible path; the oracle is undefined");

  CoverInstance inst;
  inst.optimal_path = *optimal;
  std::vector<Path> paths;
  try {
    paths = enumerate_paths_shorter_than(graph, optimal->length, state.invalid(), limits.max_paths);
  } catch (const PathCapExceeded& e) {
    throw OracleCapExceeded(std::string(e.what()) + "; use the greedy or approximate oracle");
  }
  std::vector<char> is_candidate(graph.edge_count(), 0);
  for (Path& p : paths) {
    // equal-length paths only block the search if the tie-break visits them first
    if (lengths_equal(p.length, optimal->length) && !(p.edges < optimal->edges)) continue;
    bool infeasible = false;
    for (EdgeId e : p.edges)
      if (!world.is_valid(e)) {
        infeasible = true;
        is_candidate[e] = 1;
      }
    if (infeasible) inst.universe.push_back(std::move(p));
  }
  std::vector<std::size_t> index_of(graph.edge_count(), 0);
  for (EdgeId e = 0; e < graph.edge_count(); ++e)
    if (is_candidate[e]) {
      index_of[e] = inst.candidates.size();
      inst.candidates.push_back(e);
    }
  inst.covers.assign(inst.candidates.size(), {});
  for (std::size_t u = 0; u < inst.universe.size(); ++u)
    for (EdgeId e : inst.universe[u].edges)
      if (!world.is_valid(e)) inst.covers[index_of[e]].push_back(u);
  return inst;
}

std::size_t min_cover_size(const std::vector<std::vector<std::size_t>>& sets, std::size_t universe_size,
                           std::size_t max_search_nodes) {
  if (universe_size == 0) return 0;
  std::vector<Bits> masks;
  std::vector<std::vector<std::size_t>> covering(universe_size);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    Bits b = make_bits(universe_size);
    for (std::size_t u : sets[s]) {
      set_bit(b, u);
      covering[u].push_back(s);
    }
    masks.push_back(std::move(b));
  }
  for (const auto& c : covering)
    if (c.empty()) throw ContractError("set cover instance has an uncoverable element");

  // Branch on the uncovered element with the fewest covering sets; prune by
  // the incumbent.
  std::size_t best = greedy_cover_sets(sets, universe_size).size();
  std::size_t nodes = 0;
  std::function<void(const Bits&, std::size_t)> search = [&](const Bits& covered, std::size_t depth) {
    if (++nodes > max_search_nodes) throw OracleCapExceeded("exact set cover search exceeded its node budget");
    std::size_t pick = universe_size, fewest = SIZE_MAX;
    for (std::size_t u = 0; u < universe_size; ++u)
      if (!test_bit(covered, u) && covering[u].size() < fewest) {
        fewest = covering[u].size();
        pick = u;
      }
    if (pick == universe_size) {
      best = std::min(best, depth);
      return;
    }
    if (depth + 1 >= best) return;
    for (std::size_t s : covering[pick]) {
      Bits next = covered;
      for (std::size_t w = 0; w < next.size(); ++w) next[w] |= masks[s][w];
      search(next, depth + 1);
    }
  };
  search(make_bits(universe_size), 0);
  return best;
}

std::vector<std::size_t> greedy_cover_sets(const std::vector<std::vector<std::size_t>>& sets,
                                           std::size_t universe_size) {
  std::vector<Bits> masks;
  for (const auto& s : sets) {
    Bits b = make_bits(universe_size);
    for (std::size_t u : s) set_bit(b, u);
    masks.push_back(std::move(b));
  }
  Bits covered = make_bits(universe_size);
  std::size_t remaining = universe_size;
  std::vector<std::size_t> chosen;
  while (remaining > 0) {
    std::size_t best = sets.size(), best_gain = 0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const std::size_t gain = popcount_and_not(masks[s], covered);
      if (gain > best_gain) {
        best_gain = gain;
        best = s;
      }
    }
    if (best == sets.size()) throw ContractError("set cover instance has an uncoverable element");
    for (std::size_t w = 0; w < covered.size(); ++w) covered[w] |= masks[best][w];
    remaining -= best_gain;
    chosen.push_back(best);
  }
  return chosen;
}

std::size_t exact_cover_value(const ExplicitGraph& graph, const SearchState& state, const World& world,
                              const OracleLimits& limits) {
  const CoverInstance inst = build_cover_instance(graph, state, world, limits);
  return min_cover_size(inst.covers, inst.universe.size(), limits.max_search_nodes);
}

std::vector<EdgeId> greedy_cover(const ExplicitGraph& graph, const SearchState& state, const World& world,
                                 const OracleLimits& limits) {
  const CoverInstance inst = build_cover_instance(graph, state, world, limits);
  std::vector<EdgeId> out;
  for (std::size_t idx : greedy_cover_sets(inst.covers, inst.universe.size())) out.push_back(inst.candidates[idx]);
  return out;
}

std::size_t clairvoyant_evaluations(const ExplicitGraph& graph, const SearchState& state, const World& world,
                                    const OracleLimits& limits) {
  const CoverInstance inst = build_cover_instance(graph, state, world, limits);
  std::size_t verify = 0;
  for (EdgeId e : inst.optimal_path.edges)
    if (!state.is_evaluated(e)) ++verify;
  return min_cover_size(inst.covers, inst.universe.size(), limits.max_search_nodes) + verify;
}

EdgeId exact_oracle_action(const ExplicitGraph& graph, const SearchState& state, const World& world,
                           const OracleLimits& limits) {
  const std::vector<EdgeId> candidates = action_set(graph, state);
  if (candidates.empty()) throw ContractError("exact oracle queried at a goal state");
  EdgeId best = candidates.front();
  std::size_t best_cost = SIZE_MAX;
  for (EdgeId e : candidates) {
    const std::size_t cost = 1 + clairvoyant_evaluations(graph, transition(state, e, world), world, limits);
    if (cost < best_cost) {
      best_cost = cost;
      best = e;
    }
  }
  return best;
}

OracleChoice approx_oracle_choice(const ExplicitGraph& graph, const SearchState& state, const World& world) {
  auto path = shortest_path(graph, state.invalid());
  if (!path) throw InfeasibleError("no feasible path remains; the oracle is undefined");
  std::optional<EdgeId> best;
  double best_gain = -kInfinity;
  for (EdgeId e : path->edges) {
    if (state.is_evaluated(e) || world.is_valid(e)) continue;
    EdgeSet excluded = state.invalid();
    excluded.insert(e);
    auto replacement = shortest_path(graph, excluded);
    const double gain = replacement ? replacement->length - path->length : kInfinity;
    if (!best || gain > best_gain) {
      best = e;
      best_gain = gain;
    }
  }
  if (best) return {*best, false};
  for (EdgeId e : path->edges)
    if (!state.is_evaluated(e)) return {e, true};
  throw ContractError("oracle queried at a goal state");
}

EdgeId approx_oracle_action(const ExplicitGraph& graph, const SearchState& state, const World& world) {
  return approx_oracle_choice(graph, state, world).edge;
}

EdgeId ApproxOracleSelector::select(const SelectionContext& ctx) {
  const OracleChoice choice = approx_oracle_choice(ctx.graph, ctx.state, world_);
  if (choice.fallback) ++fallbacks_;
  return choice.edge;
}

EdgeId ExactOracleSelector::select(const SelectionContext& ctx) {
  return exact_oracle_action(ctx.graph, ctx.state, world_, limits_);
}

}  // namespace lazysp
