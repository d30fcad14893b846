#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lazysp/graph.hpp"
#include "lazysp/state.hpp"

namespace lazysp {

using Rng = std::mt19937_64;

/// Per-edge validity assignment (1 = valid, 0 = invalid).
struct World {
  std::vector<std::uint8_t> valid;

  World() = default;
  explicit World(std::size_t edge_count, bool all_valid = true) : valid(edge_count, all_valid ? 1 : 0) {}
  explicit World(std::vector<std::uint8_t> bits) : valid(std::move(bits)) {}

  std::size_t size() const { return valid.size(); }
  bool is_valid(EdgeId e) const { return valid.at(e) != 0; }
  void set(EdgeId e, bool v) { valid.at(e) = v ? 1 : 0; }

  friend bool operator==(const World&, const World&) = default;
  friend auto operator<=>(const World&, const World&) = default;
};

struct SupportPoint {
  World world;
  double probability = 0.0;
};

class DistributionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The edges a world leaves valid, as an exclusion set for path queries.
EdgeSet invalid_edges(const World& world);
bool is_feasible(const ExplicitGraph& graph, const World& world);

/// A sampleable distribution over worlds of one graph, with an optional exact
/// support and the list of training worlds used by priors and posteriors.
class WorldDistribution {
 public:
  using Sampler = std::function<World(Rng&)>;

  WorldDistribution(Sampler sampler, std::vector<World> training_worlds,
                    std::optional<std::vector<SupportPoint>> support = std::nullopt);

  /// Distribution with an exact finite support; training worlds are sampled
  /// from it with `training_seed`.
  static WorldDistribution from_support(std::vector<SupportPoint> support, std::size_t training_count,
                                        std::uint64_t training_seed);
  /// Uniform distribution over a list of worlds, which also serve as training worlds.
  static WorldDistribution empirical(std::vector<World> worlds);

  World sample(Rng& rng) const { return sampler_(rng); }
  bool has_exact_support() const { return support_.has_value(); }
  std::span<const SupportPoint> support() const;
  std::span<const World> training_worlds() const { return training_; }

 private:
  Sampler sampler_;
  std::vector<World> training_;
  std::optional<std::vector<SupportPoint>> support_;
};

/// A graph together with its world distribution.
struct Environment {
  ExplicitGraph graph;
  WorldDistribution distribution;
};

/// Three parallel two-edge routes (top < middle < bottom by length) with
/// correlated validity: top_left and middle_right fail together.
Environment env1_distribution(std::size_t training_count = 1000, std::uint64_t training_seed = 0);

/// Four parallel two-edge routes (top < middle < bottom < base) with a
/// two-point world distribution.
Environment env2_distribution(std::size_t training_count = 1000, std::uint64_t training_seed = 0);

/// Edge id by name for the toy environments ("top_left", "middle_right", ...).
EdgeId toy_edge(const Environment& env, const std::string& name);
std::vector<std::string> toy_edge_names(std::size_t route_count);

/// Fraction of worlds in which each edge is invalid. Throws on an empty set.
std::vector<double> prior_edge_prob(std::span<const World> training_worlds);

/// Softmax weights over training worlds given the evaluation record; world i
/// scores minus the number of evaluated edges whose outcome disagrees with it.
std::vector<double> posterior_world_weights(const SearchState& state, std::span<const World> training_worlds);

/// Posterior probability that each edge is invalid.
std::vector<double> posterior_edge_prob(const SearchState& state, std::span<const World> training_worlds);

/// Same, restricted to the listed edges (result is parallel to `edges`).
std::vector<double> posterior_edge_prob(const SearchState& state, std::span<const World> training_worlds,
                                        std::span<const EdgeId> edges);

}  // namespace lazysp
