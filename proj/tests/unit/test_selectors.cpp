#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lazysp/features.hpp"
#include "lazysp/search.hpp"
#include "lazysp/selectors.hpp"
#include "test_util.hpp"

using namespace lazysp;
using namespace lazysp::testing;

namespace {

// Expected evaluations to invalidate by enumerating every outcome vector.
double brute_expected(const std::vector<double>& p_valid) {
  const std::size_t n = p_valid.size();
  double total = 0.0;
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) prob *= (mask >> i & 1) ? p_valid[i] : 1 - p_valid[i];
    std::size_t first_bad = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!(mask >> i & 1)) {
        first_bad = i;
        break;
      }
    if (first_bad < n) total += prob * static_cast<double>(first_bad + 1);
  }
  return total;
}

Path path_of(const ExplicitGraph& g) { return *shortest_path(g); }

}  // namespace

TEST(Baselines, Definitions) {
  const std::vector<EdgeId> c{4, 7, 9};
  Rng rng(0);
  EXPECT_EQ(baseline_select(BaselineKind::kForward, c, 0, rng), 4u);
  EXPECT_EQ(baseline_select(BaselineKind::kBackward, c, 0, rng), 9u);
  EXPECT_EQ(baseline_select(BaselineKind::kAlternate, c, 0, rng), 4u);
  EXPECT_EQ(baseline_select(BaselineKind::kAlternate, c, 1, rng), 9u);
  EXPECT_EQ(baseline_select(BaselineKind::kAlternate, c, 2, rng), 4u);
  EXPECT_THROW(baseline_select(BaselineKind::kForward, {}, 0, rng), ContractError);
}

TEST(Baselines, RandomIsUniformAndSeeded) {
  const std::vector<EdgeId> c{1, 2, 3};
  Rng a(5), b(5);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 30000; ++i) {
    const EdgeId x = baseline_select(BaselineKind::kRandom, c, 0, a);
    EXPECT_EQ(x, baseline_select(BaselineKind::kRandom, c, 0, b));
    counts[x]++;
  }
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(counts[k], 10000, 400);
}

TEST(FailFast, ArgmaxWithEarliestTie) {
  const std::vector<EdgeId> c{0, 1, 2};
  EXPECT_EQ(select_failfast(c, std::vector<double>{0.1, 0.9, 0.5}), 1u);
  EXPECT_EQ(select_failfast(c, std::vector<double>{0.3, 0.3, 0.3}), 0u);
}

TEST(FailFast, AscendingValidityIsCheaper) {
  EXPECT_NEAR(expected_evaluations_to_invalidate(std::vector<double>{0.3, 0.6}), 0.94, 1e-12);
  EXPECT_NEAR(brute_expected({0.3, 0.6}), 0.94, 1e-12);
  EXPECT_NEAR(expected_evaluations_to_invalidate(std::vector<double>{0.6, 0.3}), brute_expected({0.6, 0.3}), 1e-12);
  EXPECT_NEAR(brute_expected({0.6, 0.3}), 1.24, 1e-12);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> p(1 + rng() % 6);
    for (double& x : p) x = u(rng);
    EXPECT_NEAR(expected_evaluations_to_invalidate(p), brute_expected(p), 1e-12);
  }
}

TEST(PostFailFast, FreshStateMatchesFailFast) {
  const auto env = env1_distribution(300, 2);
  const auto exp = Experience::from_worlds(env.distribution.training_worlds());
  const std::vector<EdgeId> c{0, 1};
  EXPECT_EQ(select_post_failfast(c, SearchState(6), exp->training_worlds), select_failfast(c, exp->invalid_prior));
}

TEST(PostFailFast, SingleTrainingWorldTargetsItsInvalidEdge) {
  const auto g = diamond();
  const std::vector<World> one{world_without(4, {kAG})};
  const std::vector<EdgeId> c{kSA, kAG};
  EXPECT_EQ(select_post_failfast(c, SearchState(4), one), kAG);
}

TEST(PostFailFast, Env2AfterTopLeftInvalid) {
  const auto env = env2_distribution(2000, 1);
  SearchState s(8);
  s.record(toy_edge(env, "top_left"), false);
  const auto tw = env.distribution.training_worlds();
  const auto post = posterior_edge_prob(s, tw);
  // mode 1 dominates: middle_right and bottom_left are the invalid edges
  EXPECT_GT(post[toy_edge(env, "bottom_left")], 0.5);
  const auto path = *shortest_path(env.graph, s.invalid());
  const auto cand = unevaluated_edges(path, s);
  const EdgeId pick = select_post_failfast(cand, s, tw);
  EXPECT_EQ(pick, toy_edge(env, "middle_right"));
}

TEST(Features, LocationScores) {
  EXPECT_EQ(location_score(0, 3), 1.0);
  EXPECT_EQ(location_score(1, 3), 0.5);
  EXPECT_EQ(location_score(2, 3), 0.0);
  EXPECT_EQ(location_score(0, 1), 1.0);
}

TEST(Features, DiamondDeltaLength) {
  const auto g = diamond();
  const auto path = path_of(g);
  const std::vector<World> tw{World(4), world_without(4, {kAG})};
  const auto prior = prior_edge_prob(tw);
  const auto f = compute_features(g, path, kAG, SearchState(4), tw, prior);
  EXPECT_NEAR(f.delta_len, 0.2, 1e-12);
  EXPECT_DOUBLE_EQ(f.delta_eval, 1.0);
  EXPECT_DOUBLE_EQ(f.prior, 0.5);
  EXPECT_DOUBLE_EQ(f.posterior, 0.5);
  EXPECT_DOUBLE_EQ(f.location, 0.0);
  EXPECT_DOUBLE_EQ(f.pdl, f.posterior * f.delta_len);
  EXPECT_THROW(compute_features(g, path, kSB, SearchState(4), tw, prior), std::invalid_argument);
}

TEST(Features, DeltaEvalCountsEvaluatedReplacementEdges) {
  const auto g = diamond();
  SearchState s(4);
  s.record(kSB, true);
  const auto path = path_of(g);
  const std::vector<World> tw{World(4)};
  const auto f = compute_features(g, path, kSA, s, tw, prior_edge_prob(tw));
  EXPECT_DOUBLE_EQ(f.delta_eval, 0.5);
}

TEST(Features, DisconnectingEdgeUsesSentinel) {
  const auto g = chain(3);
  const auto path = path_of(g);
  const std::vector<World> tw{World(3)};
  const auto f = compute_features(g, path, 1, SearchState(3), tw, prior_edge_prob(tw));
  EXPECT_DOUBLE_EQ(f.delta_len, disconnect_sentinel(g));
  EXPECT_DOUBLE_EQ(disconnect_sentinel(g), 6.0);
  EXPECT_DOUBLE_EQ(f.delta_eval, 1.0);
}

TEST(Features, CandidateFeaturesAgreeWithSingleEdge) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto g = random_graph(rng, 8, 14);
    std::vector<World> tw;
    for (int i = 0; i < 5; ++i) tw.push_back(random_world(rng, g.edge_count(), 0.3));
    const auto exp = Experience::from_worlds(tw);
    SearchState s(g.edge_count());
    const auto path = *shortest_path(g);
    if (path.edges.size() > 1) s.record(path.edges[0], true);
    const auto cand = unevaluated_edges(path, s);
    const auto all = compute_candidate_features(g, path, cand, s, *exp);
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const auto one = compute_features(g, path, cand[i], s, tw, exp->invalid_prior);
      EXPECT_EQ(one.values(), all[i].values());
    }
  }
}

TEST(Features, NormalizationPerDecision) {
  std::vector<FeatureVector> f(3);
  f[0].prior = 0.2;
  f[1].prior = 0.6;
  f[2].prior = 0.4;
  for (auto& x : f) x.location = 0.7;
  const auto n = normalize_per_decision(f);
  EXPECT_DOUBLE_EQ(n[0][0], 0.0);
  EXPECT_DOUBLE_EQ(n[1][0], 1.0);
  EXPECT_DOUBLE_EQ(n[2][0], 0.5);
  for (const auto& row : n) EXPECT_EQ(row[2], 0.0);
}

TEST(LinearPolicy, SpecialWeightsReduceToBaselines) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 60; ++t) {
    const auto g = random_graph(rng, 9, 16);
    std::vector<World> tw;
    for (int i = 0; i < 8; ++i) tw.push_back(random_world(rng, g.edge_count(), 0.3));
    const auto exp = Experience::from_worlds(tw);
    const auto path = *shortest_path(g);
    const SearchState s(g.edge_count());
    const auto cand = unevaluated_edges(path, s);
    const auto feats = compute_candidate_features(g, path, cand, s, *exp);
    LinearPolicy loc;
    loc.weights = {0, 0, 1, 0, 0, 0};
    EXPECT_EQ(cand[linear_select(loc, feats)], cand.front());
    LinearPolicy prior;
    prior.weights = {1, 0, 0, 0, 0, 0};
    EXPECT_EQ(cand[linear_select(prior, feats)], select_failfast(cand, exp->invalid_prior));
    std::size_t best = 0;
    for (std::size_t i = 1; i < feats.size(); ++i)
      if (feats[i].pdl > feats[best].pdl) best = i;
    EXPECT_EQ(linear_select(pdl_policy(), feats), best);
    LinearPolicy raw = pdl_policy();
    raw.normalize = false;
    EXPECT_EQ(linear_select(raw, feats), best);
  }
}

TEST(LinearPolicy, PositiveScalingInvariant) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0, 1);
  for (int t = 0; t < 200; ++t) {
    std::vector<FeatureVector> feats(1 + rng() % 6);
    for (auto& f : feats) {
      f.prior = n(rng);
      f.posterior = n(rng);
      f.location = n(rng);
      f.delta_len = n(rng);
    }
    LinearPolicy p;
    for (double& w : p.weights) w = n(rng);
    LinearPolicy q = p;
    for (double& w : q.weights) w *= 3.5;
    EXPECT_EQ(linear_select(p, feats), linear_select(q, feats));
  }
}

TEST(LinearPolicy, JsonRoundTrip) {
  LinearPolicy p;
  p.weights = {0.1, -2.5, 1e-17, 3.0, 0.0, 1.0 / 3.0};
  p.normalize = false;
  EXPECT_EQ(policy_from_json(policy_to_json(p)), p);
  auto bad = policy_to_json(p);
  bad["magic"] = "nope";
  EXPECT_THROW(policy_from_json(bad), std::exception);
}

TEST(Selectors, ContractHoldsForAll) {
  std::mt19937_64 gen(21);
  for (int t = 0; t < 40; ++t) {
    const auto g = random_graph(gen, 9, 16);
    std::vector<World> tw;
    for (int i = 0; i < 6; ++i) tw.push_back(random_world(gen, g.edge_count(), 0.3));
    const auto exp = Experience::from_worlds(tw);
    const World w = random_world(gen, g.edge_count(), 0.3);
    for (const auto& name : baseline_names()) {
      auto sel = make_baseline(name, exp);
      Rng rng(t);
      EXPECT_NO_THROW(run_lazysp(g, w, *sel, rng)) << name;
    }
  }
  EXPECT_THROW(make_baseline("failfast", nullptr), std::invalid_argument);
  EXPECT_THROW(make_baseline("bogus", nullptr), std::invalid_argument);
}
