#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lazysp/imitation.hpp"
#include "lazysp/oracle.hpp"
#include "lazysp/qlearning.hpp"
#include "lazysp/search.hpp"
#include "lazysp/seeding.hpp"
#include "lazysp/stroll.hpp"
#include "lazysp/value_iteration.hpp"
#include "test_util.hpp"

using namespace lazysp;
using namespace lazysp::testing;

namespace {

WorldDistribution single_world(const World& w) {
  return WorldDistribution::from_support({{w, 1.0}}, 4, 0);
}

ImitationDataset random_dataset(std::mt19937_64& rng, std::size_t n, const std::function<std::size_t(
                                                                          const std::vector<FeatureVector>&)>& label) {
  std::uniform_real_distribution<double> u(0, 1);
  ImitationDataset d;
  for (std::size_t i = 0; i < n; ++i) {
    Decision dec;
    dec.candidates.resize(2 + rng() % 4);
    for (auto& f : dec.candidates) {
      f.prior = u(rng);
      f.posterior = u(rng);
      f.location = u(rng);
      f.delta_len = u(rng);
      f.delta_eval = u(rng);
      f.pdl = u(rng);
    }
    dec.chosen = label(dec.candidates);
    dec.episode = i;
    d.add(dec);
  }
  return d;
}

}  // namespace

TEST(QLearning, ChainConvergesToMinusK) {
  for (int k = 1; k <= 5; ++k) {
    const auto g = chain(k);
    QLearningConfig cfg;
    cfg.episodes = 3000;
    cfg.exploration_episodes = 100;
    const QTable q = q_learning(g, single_world(World(k)), cfg, 1);
    const SearchState fresh(k);
    const auto cand = action_set(g, fresh);
    EXPECT_NEAR(q.max_value(fresh, cand), -k, 1e-6) << k;
  }
}

TEST(QLearning, GuardAndTableInvariants) {
  const auto g = chain(13);
  EXPECT_THROW(q_learning(g, single_world(World(13)), {}, 0), std::invalid_argument);
  const auto env = env1_distribution();
  QLearningConfig cfg;
  cfg.episodes = 500;
  const QTable q = q_learning(env.graph, env.distribution, cfg, 3);
  const auto doc = q.to_json();
  for (const auto& e : doc["entries"]) EXPECT_LE(e[2].get<double>(), 0.0);
  const QTable back = QTable::from_json(doc);
  EXPECT_EQ(back.to_json().dump(), doc.dump());
}

TEST(QLearning, DeterministicAndLogged) {
  const auto env = env2_distribution();
  QLearningConfig cfg;
  cfg.episodes = 300;
  TrainingLog log;
  const auto a = q_learning(env.graph, env.distribution, cfg, 9, &log);
  const auto b = q_learning(env.graph, env.distribution, cfg, 9);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(log.records().size(), 300u);
  std::stringstream ss;
  log.write(ss);
  const auto back = TrainingLog::read(ss);
  ASSERT_EQ(back.records().size(), 300u);
  EXPECT_EQ(back.records()[17].reward, log.records()[17].reward);
}

TEST(QLearning, RewardBookkeepingIdentity) {
  const auto env = env1_distribution();
  const QTable q = q_learning(env.graph, env.distribution, {}, 4);
  QTableSelector sel(q);
  Rng rng(5);
  long reward = 0, evals = 0;
  for (int i = 0; i < 1000; ++i) {
    const World w = env.distribution.sample(rng);
    const auto r = run_lazysp(env.graph, w, sel, rng);
    reward += r.reward();
    evals += static_cast<long>(r.evaluations());
  }
  EXPECT_EQ(reward, -evals);
}

TEST(ValueIteration, Env1Pinned) {
  const auto env = env1_distribution();
  EXPECT_NEAR(value_iteration_exact(env.graph, env.distribution), 3.8125, 1e-12);
}

TEST(ValueIteration, Env2Pinned) {
  const auto env = env2_distribution();
  EXPECT_NEAR(value_iteration_exact(env.graph, env.distribution), 5.0, 1e-12);
  ExactSolver solver(env.graph, env.distribution.support());
  EXPECT_EQ(solver.optimal_action(SearchState(8)), toy_edge(env, "top_left"));
}

TEST(ValueIteration, TwoPointDistinguishingEdge) {
  const auto g = diamond();
  const std::vector<SupportPoint> sup{{world_without(4, {kAG}), 0.7}, {world_without(4, {kSA}), 0.3}};
  ExactSolver solver(g, sup);
  EXPECT_NEAR(solver.value(SearchState(4)), -3.3, 1e-12);
  EXPECT_EQ(solver.optimal_action(SearchState(4)), kAG);
  EXPECT_NEAR(solver.q_value(SearchState(4), kSA), -3.7, 1e-12);
}

TEST(ValueIteration, SingleWorldEqualsClairvoyant) {
  std::mt19937_64 gen(12);
  int n = 0;
  while (n < 40) {
    const auto g = random_graph(gen, 7, 10);
    const World w = random_world(gen, g.edge_count(), 0.35);
    if (!is_feasible(g, w)) continue;
    ++n;
    const auto dist = single_world(w);
    EXPECT_NEAR(value_iteration_exact(g, dist),
                static_cast<double>(exact_cover_value(g, SearchState(g.edge_count()), w) +
                                    shortest_path(g, invalid_edges(w))->edges.size()),
                1e-12);
  }
}

TEST(ValueIteration, LowerBoundsEverySelector) {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 30; ++t) {
    const auto g = random_graph(gen, 7, 10);
    std::vector<SupportPoint> sup;
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
      World w = random_world(gen, g.edge_count(), 0.3);
      if (!is_feasible(g, w)) w = World(g.edge_count());
      const double p = 1.0 + static_cast<double>(gen() % 4);
      sup.push_back({w, p});
      total += p;
    }
    for (auto& s : sup) s.probability /= total;
    const auto dist = WorldDistribution::from_support(sup, 20, 1);
    const double opt = value_iteration_exact(g, dist);
    const auto exp = Experience::from_worlds(dist.training_worlds());
    for (const auto& name : baseline_names()) {
      auto sel = make_baseline(name, exp);
      EXPECT_LE(opt, expected_evaluations(g, sup, *sel) + 1e-12) << name;
    }
  }
  EXPECT_THROW(ExactSolver(chain(13), std::vector<SupportPoint>{{World(13), 1.0}}), std::invalid_argument);
}

TEST(Classifier, LearnsPdlLabeller) {
  std::mt19937_64 rng(1);
  const auto data = random_dataset(rng, 400, [](const std::vector<FeatureVector>& c) {
    return static_cast<std::size_t>(std::max_element(c.begin(), c.end(), [](auto& a, auto& b) { return a.pdl < b.pdl; }) -
                                    c.begin());
  });
  const auto fit = classifier_fit(data);
  const auto& w = fit.policy.weights;
  for (std::size_t k = 0; k + 1 < kFeatureCount; ++k) EXPECT_GT(std::fabs(w[5]), std::fabs(w[k]));
  EXPECT_GT(imitation_accuracy(data, fit.policy), 0.95);
}

TEST(Classifier, SeparableTwoFeatureData) {
  ImitationDataset d;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    Decision dec;
    dec.candidates.resize(2);
    dec.candidates[0].prior = u(rng);
    dec.candidates[1].prior = u(rng);
    dec.candidates[0].location = 1.0;
    dec.chosen = dec.candidates[0].prior > dec.candidates[1].prior ? 0 : 1;
    d.add(dec);
  }
  FitOptions opt;
  opt.regularization = 1e-6;
  EXPECT_DOUBLE_EQ(imitation_accuracy(d, classifier_fit(d, opt).policy), 1.0);
}

TEST(Classifier, DuplicationLeavesWeightsUnchanged) {
  std::mt19937_64 rng(3);
  const auto data = random_dataset(rng, 200, [](const std::vector<FeatureVector>& c) { return c.size() - 1; });
  ImitationDataset twice = data;
  twice.append(data);
  const auto a = classifier_fit(data).policy.weights;
  const auto b = classifier_fit(twice).policy.weights;
  for (std::size_t k = 0; k < kFeatureCount; ++k) EXPECT_NEAR(a[k], b[k], 1e-9);
}

TEST(Classifier, DegenerateAndEmpty) {
  ImitationDataset d;
  EXPECT_THROW(classifier_fit(d), std::invalid_argument);
  Decision dec;
  dec.candidates.resize(1);
  d.add(dec);
  const auto fit = classifier_fit(d);
  EXPECT_TRUE(fit.degenerate);
  for (double w : fit.policy.weights) EXPECT_EQ(w, 0.0);
  Decision bad;
  bad.candidates.resize(2);
  bad.chosen = 2;
  EXPECT_THROW(d.add(bad), std::invalid_argument);
}

TEST(Classifier, LossIsOrderInsensitive) {
  std::mt19937_64 rng(4);
  const auto data = random_dataset(rng, 150, [](const std::vector<FeatureVector>& c) { return c.size() / 2; });
  std::vector<Decision> perm(data.decisions().begin(), data.decisions().end());
  std::shuffle(perm.begin(), perm.end(), rng);
  ImitationDataset shuffled;
  for (auto& d : perm) shuffled.add(d);
  LinearPolicy p;
  p.weights = {0.3, -1, 2, 0.5, -0.2, 1};
  EXPECT_NEAR(imitation_loss(data, p, 1e-3), imitation_loss(shuffled, p, 1e-3), 1e-12);
}

TEST(Mixture, ExtremesAndFrequency) {
  BaselineSelector a(BaselineKind::kForward), b(BaselineKind::kBackward);
  Rng rng(0);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(&mixture_rollin(a, b, 1.0, rng), &b);
    EXPECT_EQ(&mixture_rollin(a, b, 0.0, rng), &a);
  }
  int rollin = 0;
  for (int i = 0; i < 10000; ++i) {
    Rng ep(derive_seed(77, {static_cast<std::uint64_t>(i)}));
    if (&mixture_rollin(a, b, 0.5, ep) == &b) ++rollin;
  }
  EXPECT_NEAR(rollin / 10000.0, 0.5, 0.02);
  EXPECT_THROW(mixture_rollin(a, b, 1.5, rng), std::invalid_argument);
}

TEST(ImitationReduction, ZeroOneLossBoundsAdvantage) {
  std::mt19937_64 gen(14);
  int decisions = 0;
  for (int t = 0; t < 60; ++t) {
    const auto g = random_graph(gen, 7, 11);
    const World w = random_world(gen, g.edge_count(), 0.35);
    if (!is_feasible(g, w)) continue;
    SearchState s(g.edge_count());
    Rng rng(t);
    while (!is_goal(g, s).goal) {
      const auto cand = action_set(g, s);
      const EdgeId pi = baseline_select(BaselineKind::kRandom, cand, 0, rng);
      const EdgeId oracle = exact_oracle_action(g, s, w);
      const double v = -static_cast<double>(clairvoyant_evaluations(g, s, w));
      const double q = -1.0 - static_cast<double>(clairvoyant_evaluations(g, transition(s, pi, w), w));
      const double indicator = pi == oracle ? 1.0 : 0.0;
      EXPECT_LE(indicator - 1.0, q - v);
      EXPECT_LE(q - v, 0.0);
      if (pi == oracle) EXPECT_EQ(q, v);
      s = transition(s, pi, w);
      ++decisions;
    }
  }
  EXPECT_GT(decisions, 100);
}

TEST(Stroll, BetaScheduleAndValidation) {
  StrollConfig c;
  EXPECT_EQ(stroll_beta(c, 1), 1.0);
  EXPECT_EQ(stroll_beta(c, 2), 0.0);
  c.rollin = RollinKind::kHeuristic;
  EXPECT_NEAR(stroll_beta(c, 2), 0.81, 1e-15);
  const auto env = env2_distribution(100, 0);
  StrollConfig bad;
  bad.iterations = 2;
  bad.betas = {0.5, 0.9};
  EXPECT_THROW(stroll_train(env.graph, env.distribution, bad, 0), std::invalid_argument);
  bad.betas = {1.2};
  EXPECT_THROW(stroll_train(env.graph, env.distribution, bad, 0), std::invalid_argument);
}

TEST(Stroll, SingleIterationOracleRollinIsBehaviourCloning) {
  const auto env = env1_distribution(200, 0);
  StrollConfig c;
  c.iterations = 1;
  c.betas = {1.0};
  c.validation_worlds = 50;
  const auto a = stroll_train(env.graph, env.distribution, c, 5);
  const auto b = stroll_train(env.graph, env.distribution, supervised_config(StrollConfig{.validation_worlds = 50}), 5);
  EXPECT_EQ(a.policy, b.policy);
  for (const auto& r : a.log.records()) EXPECT_EQ(r.note, "rollin");
}

TEST(Stroll, HeuristicRollinRecordsBestBaseline) {
  const auto env = env2_distribution(300, 0);
  StrollConfig c;
  c.rollin = RollinKind::kHeuristic;
  c.iterations = 3;
  c.validation_worlds = 50;
  const auto r = stroll_train(env.graph, env.distribution, c, 6);
  const auto exp = Experience::from_worlds(env.distribution.training_worlds());
  EXPECT_EQ(r.rollin_policy,
            best_baseline(env.graph, env.distribution.training_worlds().subspan(0, c.heuristic_selection_worlds), exp,
                          derive_seed(6, {0xb5})));
  ASSERT_FALSE(r.log.records().empty());
  EXPECT_EQ(r.log.records().front().note, "rollin=" + r.rollin_policy);
}

TEST(Stroll, Env2PolicyBeatsEveryBaselineExactly) {
  const auto env = env2_distribution(1000, 0);
  const auto r = stroll_train(env.graph, env.distribution, StrollConfig{}, 1);
  const auto exp = Experience::from_worlds(env.distribution.training_worlds());
  LinearSelector learned(r.policy, exp);
  const double mine = expected_evaluations(env.graph, env.distribution.support(), learned);
  for (const auto& name : baseline_names()) {
    auto sel = make_baseline(name, exp);
    EXPECT_LE(mine, expected_evaluations(env.graph, env.distribution.support(), *sel) + 1e-12) << name;
  }
}

TEST(Stroll, AggregatesAndIsDeterministic) {
  const auto env = env1_distribution(200, 0);
  StrollConfig c;
  c.iterations = 4;
  c.episodes_per_iteration = 5;
  c.validation_worlds = 30;
  std::vector<std::size_t> sizes;
  const auto a = stroll_train(env.graph, env.distribution, c, 8, {},
                              [&](const IterationSummary& s) { sizes.push_back(s.dataset_size); });
  const auto b = stroll_train(env.graph, env.distribution, c, 8);
  EXPECT_EQ(a.policy, b.policy);
  ASSERT_EQ(sizes.size(), 4u);
  EXPECT_TRUE(std::is_sorted(sizes.begin(), sizes.end()));
  EXPECT_EQ(sizes.back(), a.dataset.size());
  EXPECT_GE(a.best_iteration, 1u);
}
