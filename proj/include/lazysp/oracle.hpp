#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lazysp/graph.hpp"
#include "lazysp/search.hpp"
#include "lazysp/state.hpp"
#include "lazysp/worlds.hpp"

namespace lazysp {

/// Raised when an exact oracle query is too large for enumeration; callers
/// should fall back to the greedy or approximate oracle.
class OracleCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  std::size_t max_paths = 20000;
  std::size_t max_search_nodes = 5'000'000;
};

/// Set-cover view of the clairvoyant problem at a state. The universe holds
/// every path that avoids the evaluated-invalid edges, contains a world-invalid
/// edge and would be searched before the shortest feasible path: strictly
/// shorter, or of equal length and earlier in the tie-break order. Candidates
/// are the world-invalid edges on those paths.
struct CoverInstance {
  Path optimal_path;                             // shortest feasible path under the world
  std::vector<Path> universe;
  std::vector<EdgeId> candidates;                // sorted by id
  std::vector<std::vector<std::size_t>> covers;  // candidate index -> universe indices
};

CoverInstance build_cover_instance(const ExplicitGraph& graph, const SearchState& state, const World& world,
                                   const OracleLimits& limits = {});

/// Abstract set cover over universe elements 0..universe_size-1; sets[i]
/// lists the elements covered by set i.
std::size_t min_cover_size(const std::vector<std::vector<std::size_t>>& sets, std::size_t universe_size,
                           std::size_t max_search_nodes = 5'000'000);
/// Greedy cover: most newly covered elements first, ties to the smallest index.
std::vector<std::size_t> greedy_cover_sets(const std::vector<std::vector<std::size_t>>& sets,
                                           std::size_t universe_size);

/// Minimum number of invalid edges whose evaluation eliminates every path in
/// the universe.
std::size_t exact_cover_value(const ExplicitGraph& graph, const SearchState& state, const World& world,
                              const OracleLimits& limits = {});

/// Greedy set cover over the same instance, as edge ids in selection order.
std::vector<EdgeId> greedy_cover(const ExplicitGraph& graph, const SearchState& state, const World& world,
                                 const OracleLimits& limits = {});

/// Evaluations an optimal clairvoyant selector still needs from `state`:
/// the minimum cover plus the unverified edges of the shortest feasible path.
std::size_t clairvoyant_evaluations(const ExplicitGraph& graph, const SearchState& state, const World& world,
                                    const OracleLimits& limits = {});

/// Action of an optimal clairvoyant selector (earliest candidate achieving
/// the minimum of 1 + clairvoyant_evaluations after the transition).
EdgeId exact_oracle_action(const ExplicitGraph& graph, const SearchState& state, const World& world,
                           const OracleLimits& limits = {});

struct OracleChoice {
  EdgeId edge = 0;
  bool fallback = false;  // lazy path fully valid: forward choice returned
};

/// Approximate clairvoyant oracle: among world-invalid edges of the lazy
/// shortest path, the one whose removal increases the shortest path length
/// most (disconnection counts as infinite); ties to the earliest. When the
/// lazy path has no invalid edge, returns its first unevaluated edge.
OracleChoice approx_oracle_choice(const ExplicitGraph& graph, const SearchState& state, const World& world);
EdgeId approx_oracle_action(const ExplicitGraph& graph, const SearchState& state, const World& world);

/// Selector wrappers; both hold a reference to the revealed world.
class ApproxOracleSelector : public EdgeSelector {
 public:
  explicit ApproxOracleSelector(const World& world) : world_(world) {}
  std::string name() const override { return "oracle"; }
  EdgeId select(const SelectionContext& ctx) override;
  std::size_t fallback_count() const { return fallbacks_; }

 private:
  const World& world_;
  std::size_t fallbacks_ = 0;
};

class ExactOracleSelector : public EdgeSelector {
 public:
  explicit ExactOracleSelector(const World& world, OracleLimits limits = {}) : world_(world), limits_(limits) {}
  std::string name() const override { return "exact_oracle"; }
  EdgeId select(const SelectionContext& ctx) override;

 private:
  const World& world_;
  OracleLimits limits_;
};

}  // namespace lazysp
