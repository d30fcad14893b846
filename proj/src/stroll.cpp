#include "lazysp/stroll.hpp"

#include <cmath>
#include <stdexcept>

#include "lazysp/oracle.hpp"
#include "lazysp/seeding.hpp"

namespace lazysp {

double stroll_beta(const StrollConfig& config, std::size_t iteration) {
  if (iteration == 0) throw std::invalid_argument("iterations are numbered from 1");
  if (!config.betas.empty()) {
    const double b = iteration <= config.betas.size() ? config.betas[iteration - 1] : config.betas.back();
    return b;
  }
  if (config.rollin == RollinKind::kOracle) return iteration == 1 ? 1.0 : 0.0;
  return std::pow(0.9, static_cast<double>(iteration));
}

StrollConfig supervised_config(StrollConfig base) {
  base.iterations = 1;
  base.betas = {1.0};
  base.rollin = RollinKind::kOracle;
  return base;
}

double mean_policy_reward(const ExplicitGraph& graph, std::span<const World> worlds, const LinearPolicy& policy,
                          std::shared_ptr<const Experience> experience, std::uint64_t seed) {
  LinearSelector selector(policy, std::move(experience));
  double total = 0.0;
  for (std::size_t i = 0; i < worlds.size(); ++i) {
    Rng rng(derive_seed(seed, {i}));
    total += run_lazysp(graph, worlds[i], selector, rng).reward();
  }
  return worlds.empty() ? 0.0 : total / static_cast<double>(worlds.size());
}

std::string best_baseline(const ExplicitGraph& graph, std::span<const World> worlds,
                          std::shared_ptr<const Experience> experience, std::uint64_t seed) {
  std::string best;
  double best_reward = -kInfinity;
  for (const std::string& name : baseline_names()) {
    auto selector = make_baseline(name, experience);
    double total = 0.0;
    for (std::size_t i = 0; i < worlds.size(); ++i) {
      Rng rng(derive_seed(seed, {i}));
      total += run_lazysp(graph, worlds[i], *selector, rng).reward();
    }
    const double mean = total / static_cast<double>(std::max<std::size_t>(1, worlds.size()));
    if (mean > best_reward) {
      best_reward = mean;
      best = name;
    }
  }
  return best;
}

StrollResult stroll_train(const ExplicitGraph& graph, const WorldDistribution& distribution,
                          const StrollConfig& config, std::uint64_t seed, std::span<const World> validation_worlds,
                          const IterationCallback& on_iteration) {
  if (config.iterations == 0 || config.episodes_per_iteration == 0)
    throw std::invalid_argument("STROLL needs at least one iteration and one episode per iteration");
  for (std::size_t i = 1; i <= config.iterations; ++i) {
    const double b = stroll_beta(config, i);
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("mixing weights must lie in [0, 1]");
    if (i > 1 && b > stroll_beta(config, i - 1)) throw std::invalid_argument("mixing weights must be non-increasing");
  }
  const auto experience = Experience::from_worlds(distribution.training_worlds());

  std::vector<World> validation(validation_worlds.begin(), validation_worlds.end());
  if (validation.empty()) {
    Rng rng(derive_seed(seed, {0x7a1}));
    for (std::size_t i = 0; i < config.validation_worlds; ++i) validation.push_back(distribution.sample(rng));
  }

  StrollResult result;
  std::unique_ptr<EdgeSelector> heuristic;
  if (config.rollin == RollinKind::kHeuristic) {
    const auto train = distribution.training_worlds();
    const std::size_t n = std::min(config.heuristic_selection_worlds, train.size());
    result.rollin_policy =
        config.heuristic.empty() ? best_baseline(graph, train.subspan(0, n), experience, derive_seed(seed, {0xb5}))
                                 : config.heuristic;
    heuristic = make_baseline(result.rollin_policy, experience);
    result.log.add({0, 0, 0.0, "rollin=" + result.rollin_policy});
  } else {
    result.rollin_policy = "oracle";
  }

  LinearPolicy learner_policy;  // zero weights: ties resolve to the first unevaluated edge
  learner_policy.normalize = config.fit.normalize;
  double best_reward = -kInfinity;

  for (std::size_t iter = 1; iter <= config.iterations; ++iter) {
    const double beta = stroll_beta(config, iter);
    LinearSelector learner(learner_policy, experience, "learner");
    ImitationDataset fresh;
    std::size_t fallbacks = 0;
    for (std::size_t ep = 0; ep < config.episodes_per_iteration; ++ep) {
      Rng rng(derive_seed(seed, {iter, ep}));
      const World world = distribution.sample(rng);
      ApproxOracleSelector oracle(world);
      EdgeSelector& rollin = heuristic ? *heuristic : static_cast<EdgeSelector&>(oracle);
      EdgeSelector& driver = mixture_rollin(learner, rollin, beta, rng);
      RecordingSelector recorder(driver, world, *experience, fresh, iter, ep);
      const EpisodeResult episode = run_lazysp(graph, world, recorder, rng);
      fallbacks += recorder.oracle_fallbacks();
      result.log.add({iter, ep, static_cast<double>(episode.reward()),
                      &driver == &learner ? "learner" : "rollin"});
    }
    result.dataset.append(fresh);
    const FitResult fit = classifier_fit(result.dataset, config.fit);
    learner_policy = fit.policy;

    IterationSummary summary;
    summary.iteration = iter;
    summary.dataset_size = result.dataset.size();
    summary.beta = beta;
    summary.policy = fit.policy;
    summary.training_accuracy = imitation_accuracy(result.dataset, fit.policy);
    summary.oracle_fallbacks = fallbacks;
    summary.validation_reward =
        mean_policy_reward(graph, validation, fit.policy, experience, derive_seed(seed, {0xe7a1}));
    if (summary.validation_reward > best_reward) {
      best_reward = summary.validation_reward;
      result.policy = fit.policy;
      result.best_iteration = iter;
    }
    result.iterations.push_back(summary);
    if (on_iteration) on_iteration(summary);
  }
  return result;
}

}  // namespace lazysp
