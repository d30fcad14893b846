#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "lazysp/search.hpp"
#include "lazysp/worlds.hpp"

namespace lazysp {

/// Exact dynamic program over evaluation records for an exact-support world
/// distribution. The belief at a state is the support restricted to worlds
/// consistent with its evaluations, so values are memoized per record.
class ExactSolver {
 public:
  /// Throws std::invalid_argument above kMaxTabularEdges edges.
  ExactSolver(const ExplicitGraph& graph, std::span<const SupportPoint> support);

  /// Optimal expected reward V*(s) (minus the expected remaining evaluations).
  double value(const SearchState& state);
  /// Q*(s, a) = -1 + E[V*(s')].
  double q_value(const SearchState& state, EdgeId action);
  /// Optimal action; ties go to the earliest candidate.
  EdgeId optimal_action(const SearchState& state);

  /// Support worlds consistent with the state, with normalized weights.
  std::vector<std::pair<const World*, double>> posterior(const SearchState& state) const;

  std::size_t memo_size() const { return memo_.size(); }

 private:
  const ExplicitGraph& graph_;
  std::vector<SupportPoint> support_;
  std::unordered_map<std::uint64_t, double> memo_;
};

/// Optimal expected number of evaluations for the distribution's exact support.
double value_iteration_exact(const ExplicitGraph& graph, const WorldDistribution& distribution);

/// Selector acting optimally under the exact support.
class ExactOptimalSelector : public EdgeSelector {
 public:
  explicit ExactOptimalSelector(ExactSolver& solver) : solver_(solver) {}
  std::string name() const override { return "optimal"; }
  EdgeId select(const SelectionContext& ctx) override { return solver_.optimal_action(ctx.state); }

 private:
  ExactSolver& solver_;
};

}  // namespace lazysp
