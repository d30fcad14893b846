#include "lazysp/value_iteration.hpp"

#include <algorithm>
#include <stdexcept>

#include "lazysp/qlearning.hpp"

namespace lazysp {

ExactSolver::ExactSolver(const ExplicitGraph& graph, std::span<const SupportPoint> support)
    : graph_(graph), support_(support.begin(), support.end()) {
  if (graph.edge_count() > kMaxTabularEdges)
    throw std::invalid_argument("exact value iteration supports at most " + std::to_string(kMaxTabularEdges) +
                                " edges");
  for (const auto& p : support_)
    if (p.world.size() != graph.edge_count()) throw std::invalid_argument("support world size mismatch");
}

std::vector<std::pair<const World*, double>> ExactSolver::posterior(const SearchState& state) const {
  std::vector<std::pair<const World*, double>> out;
  double total = 0.0;
  for (const auto& p : support_) {
    if (p.probability <= 0.0) continue;
    bool consistent = true;
    for (EdgeId e : state.evaluated())
      if (p.world.is_valid(e) != state.is_valid(e)) {
        consistent = false;
        break;
      }
    if (consistent) {
      out.emplace_back(&p.world, p.probability);
      total += p.probability;
    }
  }
  if (out.empty()) throw std::invalid_argument("state is inconsistent with every support world");
  for (auto& [w, prob] : out) prob /= total;
  return out;
}

double ExactSolver::q_value(const SearchState& state, EdgeId action) {
  double p_valid = 0.0;
  for (const auto& [w, prob] : posterior(state))
    if (w->is_valid(action)) p_valid += prob;
  double expected = 0.0;
  if (p_valid > 0.0) {
    SearchState next = state;
    next.record(action, true);
    expected += p_valid * value(next);
  }
  if (p_valid < 1.0) {
    SearchState next = state;
    next.record(action, false);
    expected += (1.0 - p_valid) * value(next);
  }
  return -1.0 + expected;
}

double ExactSolver::value(const SearchState& state) {
  const std::uint64_t code = state.code();
  if (auto it = memo_.find(code); it != memo_.end()) return it->second;
  double v = 0.0;
  auto path = shortest_path(graph_, state.invalid());
  if (path) {
    const std::vector<EdgeId> candidates = unevaluated_edges(*path, state);
    if (!candidates.empty()) {
      v = -kInfinity;
      for (EdgeId a : candidates) v = std::max(v, q_value(state, a));
    }
  }
  memo_.emplace(code, v);
  return v;
}

EdgeId ExactSolver::optimal_action(const SearchState& state) {
  const std::vector<EdgeId> candidates = action_set(graph_, state);
  if (candidates.empty()) throw ContractError("optimal action requested at a goal state");
  EdgeId best = candidates.front();
  double best_q = -kInfinity;
  for (EdgeId a : candidates) {
    const double q = q_value(state, a);
    if (q > best_q + 1e-12) {
      best_q = q;
      best = a;
    }
  }
  return best;
}

double value_iteration_exact(const ExplicitGraph& graph, const WorldDistribution& distribution) {
  ExactSolver solver(graph, distribution.support());
  return -solver.value(SearchState(graph.edge_count()));
}

}  // namespace lazysp
