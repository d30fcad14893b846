#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lazysp/imitation.hpp"
#include "lazysp/training_log.hpp"
#include "lazysp/worlds.hpp"

namespace lazysp {

enum class RollinKind { kOracle, kHeuristic };

struct StrollConfig {
  std::size_t iterations = 10;
  std::size_t episodes_per_iteration = 20;
  /// Mixing weight per iteration; empty selects the default schedule
  /// (oracle roll-in: 1 then 0; heuristic roll-in: 0.9^i).
  std::vector<double> betas;
  RollinKind rollin = RollinKind::kOracle;
  /// Heuristic roll-in policy name; empty picks the best baseline on the
  /// training worlds.
  std::string heuristic;
  std::size_t heuristic_selection_worlds = 100;
  std::size_t validation_worlds = 200;
  FitOptions fit;
};

/// beta_i for iteration i (1-based).
double stroll_beta(const StrollConfig& config, std::size_t iteration);

struct IterationSummary {
  std::size_t iteration = 0;
  std::size_t dataset_size = 0;
  double beta = 0.0;
  double validation_reward = 0.0;  // mean reward of the policy trained at this iteration
  double training_accuracy = 0.0;
  std::size_t oracle_fallbacks = 0;
  LinearPolicy policy;
};

struct StrollResult {
  LinearPolicy policy;  // best on validation
  std::size_t best_iteration = 0;
  std::string rollin_policy;  // "oracle" or the heuristic's name
  std::vector<IterationSummary> iterations;
  ImitationDataset dataset;
  TrainingLog log;
};

/// Mean LazySP reward of a linear policy over a fixed world list.
double mean_policy_reward(const ExplicitGraph& graph, std::span<const World> worlds, const LinearPolicy& policy,
                          std::shared_ptr<const Experience> experience, std::uint64_t seed);

/// Baseline with the best mean reward on the given worlds (ties to the
/// earlier name in baseline_names()).
std::string best_baseline(const ExplicitGraph& graph, std::span<const World> worlds,
                          std::shared_ptr<const Experience> experience, std::uint64_t seed);

using IterationCallback = std::function<void(const IterationSummary&)>;

/// Interactive imitation of the approximate clairvoyant oracle. Features use
/// the distribution's training worlds; policies are scored on
/// `validation_worlds` (sampled from the distribution when empty).
StrollResult stroll_train(const ExplicitGraph& graph, const WorldDistribution& distribution,
                          const StrollConfig& config, std::uint64_t seed,
                          std::span<const World> validation_worlds = {}, const IterationCallback& on_iteration = {});

/// Behaviour cloning: one iteration with the oracle driving every episode.
StrollConfig supervised_config(StrollConfig base);

}  // namespace lazysp
