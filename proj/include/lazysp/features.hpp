#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lazysp/graph.hpp"
#include "lazysp/state.hpp"
#include "lazysp/worlds.hpp"

namespace lazysp {

inline constexpr std::size_t kFeatureCount = 6;

/// Per-candidate features, in the order used by LinearPolicy weights.
struct FeatureVector {
  double prior = 0.0;       // invalid-probability over the training worlds
  double posterior = 0.0;   // invalid-probability given the evaluations so far
  double location = 0.0;    // 1 at the first unevaluated edge, 0 at the last
  double delta_len = 0.0;   // increase of the shortest path length if the edge were invalid
  double delta_eval = 0.0;  // unevaluated fraction of that replacement path
  double pdl = 0.0;         // posterior * delta_len

  std::array<double, kFeatureCount> values() const { return {prior, posterior, location, delta_len, delta_eval, pdl}; }
};

const std::array<std::string, kFeatureCount>& feature_names();

/// Training worlds and their invalid-prior, shared by informed selectors.
struct Experience {
  std::vector<World> training_worlds;
  std::vector<double> invalid_prior;

  static std::shared_ptr<const Experience> from_worlds(std::span<const World> worlds);
};

/// f_delta_len when removing an edge disconnects start from goal: twice the
/// total edge length, an upper bound on any simple path length.
double disconnect_sentinel(const ExplicitGraph& graph);

/// Location score of the candidate at `rank` among `count` candidates.
double location_score(std::size_t rank, std::size_t count);

/// Features of one unevaluated path edge.
FeatureVector compute_features(const ExplicitGraph& graph, const Path& path, EdgeId edge, const SearchState& state,
                               std::span<const World> training_worlds, std::span<const double> priors);

/// Features of every candidate (unevaluated path edges in path order); the
/// posterior is computed once for all of them.
std::vector<FeatureVector> compute_candidate_features(const ExplicitGraph& graph, const Path& path,
                                                      std::span<const EdgeId> candidates, const SearchState& state,
                                                      const Experience& experience);

/// Min-max scales each feature across the candidates of one decision; a
/// feature that is constant across candidates maps to 0.
std::vector<std::array<double, kFeatureCount>> normalize_per_decision(std::span<const FeatureVector> features);

}  // namespace lazysp
