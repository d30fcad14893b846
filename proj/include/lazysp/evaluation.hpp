#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lazysp/search.hpp"
#include "lazysp/selectors.hpp"

namespace lazysp {

/// Builds the selector for one episode; oracles need the revealed world.
using SelectorFactory = std::function<std::unique_ptr<EdgeSelector>(const World&)>;

/// Resolves a selector spec: a baseline name, "oracle", "policy:<file>" or
/// "qtable:<file>". Informed selectors use `experience`.
SelectorFactory selector_factory(const std::string& spec, std::shared_ptr<const Experience> experience);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
};

double median(std::vector<double> values);

/// Percentile bootstrap interval of the median.
ConfidenceInterval bootstrap_median_ci(std::span<const double> values, std::size_t resamples, double confidence,
                                       std::uint64_t seed);

struct SelectorReport {
  std::string selector;
  double median = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double mean_reward = 0.0;
  std::size_t episodes = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> evaluations;  // per episode
};

struct EvalReport {
  std::vector<SelectorReport> rows;
};

/// Per-episode evaluation counts; episode i runs on worlds[i % worlds.size()]
/// with an RNG seeded from (seed, i).
using EpisodeSink = std::function<void(std::size_t episode, const EpisodeResult&)>;
std::vector<std::size_t> run_episodes(const ExplicitGraph& graph, std::span<const World> worlds,
                                      const SelectorFactory& factory, std::size_t episodes, std::uint64_t seed,
                                      const EpisodeSink& sink = {});

inline constexpr std::size_t kBootstrapResamples = 10000;

SelectorReport summarize(const std::string& name, std::vector<std::size_t> evaluations, std::uint64_t seed,
                         std::size_t resamples = kBootstrapResamples);

/// Evaluates each selector spec. Throws std::invalid_argument for 0 episodes.
EvalReport evaluate_selectors(const ExplicitGraph& graph, std::span<const World> worlds,
                              const std::vector<std::string>& specs, std::shared_ptr<const Experience> experience,
                              std::size_t episodes, std::uint64_t seed);

/// Mixed world list for contamination level `fraction`: the first
/// floor(fraction * N) positions hold contaminant worlds.
std::vector<World> contaminated_worlds(std::span<const World> clean, std::span<const World> contaminant,
                                       double fraction);

struct ContaminationRow {
  double fraction = 0.0;
  SelectorReport report;
};

std::vector<ContaminationRow> contamination_series(const ExplicitGraph& graph, std::span<const World> clean,
                                                   std::span<const World> contaminant,
                                                   const std::vector<double>& fractions, const std::string& spec,
                                                   std::shared_ptr<const Experience> experience, std::uint64_t seed);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& doc);
void write_report_table(std::ostream& out, const EvalReport& report);
/// Raw per-episode log: selector,episode,evaluations.
void write_episode_log(std::ostream& out, const EvalReport& report);

}  // namespace lazysp
