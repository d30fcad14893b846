#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lazysp/evaluation.hpp"
#include "lazysp/grid_worlds.hpp"
#include "lazysp/search.hpp"
#include "lazysp/seeding.hpp"
#include "test_util.hpp"

using namespace lazysp;
using namespace lazysp::testing;

namespace {

struct OnewallSet {
  ExplicitGraph graph;
  std::vector<World> train;
  std::vector<World> test;
};

OnewallSet onewall(double position, std::size_t n) {
  GridSpec spec;
  spec.wall_position = position;
  spec.training_count = 60;
  auto env = grid_world_generator(spec, 100);
  Rng rng(101);
  std::vector<World> test;
  for (std::size_t i = 0; i < n; ++i) test.push_back(env.distribution.sample(rng));
  const auto tw = env.distribution.training_worlds();
  return {env.graph, {tw.begin(), tw.end()}, test};
}

}  // namespace

TEST(Stats, MedianAndBootstrap) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_THROW(median({}), std::invalid_argument);
  const std::vector<double> same(20, 7.0);
  const auto ci = bootstrap_median_ci(same, 1000, 0.95, 1);
  EXPECT_EQ(ci.lower, 7.0);
  EXPECT_EQ(ci.upper, 7.0);
  std::mt19937_64 rng(3);
  std::vector<double> xs;
  for (int i = 0; i < 101; ++i) xs.push_back(static_cast<double>(rng() % 50));
  const auto a = bootstrap_median_ci(xs, 2000, 0.95, 9);
  const auto b = bootstrap_median_ci(xs, 2000, 0.95, 9);
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.upper, b.upper);
  EXPECT_LE(a.lower, median(xs));
  EXPECT_GE(a.upper, median(xs));
}

TEST(Evaluate, ZeroEpisodesRejected) {
  const auto g = diamond();
  const std::vector<World> ws{World(4)};
  EXPECT_THROW(evaluate_selectors(g, ws, {"forward"}, nullptr, 0, 1), std::invalid_argument);
}

TEST(Evaluate, ReportInvariantsAndRoundTrip) {
  const auto set = onewall(0.5, 40);
  const auto exp = Experience::from_worlds(set.train);
  const auto report = evaluate_selectors(set.graph, set.test, {"forward", "failfast", "oracle"}, exp, 40, 5);
  ASSERT_EQ(report.rows.size(), 3u);
  for (const auto& r : report.rows) {
    EXPECT_EQ(r.episodes, 40u);
    EXPECT_EQ(r.evaluations.size(), 40u);
    EXPECT_LE(r.lower, r.median);
    EXPECT_LE(r.median, r.upper);
    std::vector<double> xs(r.evaluations.begin(), r.evaluations.end());
    EXPECT_EQ(r.median, median(xs));
  }
  const auto back = report_from_json(report_to_json(report));
  EXPECT_EQ(report_to_json(back).dump(), report_to_json(report).dump());
  std::ostringstream table, log;
  write_report_table(table, report);
  write_episode_log(log, report);
  EXPECT_NE(table.str().find("failfast"), std::string::npos);
  const std::string rows = log.str();
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 121);
  const auto again = evaluate_selectors(set.graph, set.test, {"forward", "failfast", "oracle"}, exp, 40, 5);
  EXPECT_EQ(report_to_json(again).dump(), report_to_json(report).dump());
}

TEST(Evaluate, BackwardWinsWhenWallIsNearGoal) {
  const auto set = onewall(0.9, 60);
  const auto report = evaluate_selectors(set.graph, set.test, {"forward", "backward"}, nullptr, 60, 2);
  EXPECT_LE(report.rows[1].median, report.rows[0].median);
}

TEST(Evaluate, OracleDominatesPerEpisode) {
  const auto set = onewall(0.5, 40);
  const auto exp = Experience::from_worlds(set.train);
  std::vector<std::string> specs{"oracle"};
  for (const auto& n : baseline_names()) specs.push_back(n);
  const auto report = evaluate_selectors(set.graph, set.test, specs, exp, 40, 3);
  for (std::size_t k = 1; k < report.rows.size(); ++k)
    for (std::size_t i = 0; i < 40; ++i)
      EXPECT_LE(report.rows[0].evaluations[i], report.rows[k].evaluations[i]) << report.rows[k].selector;
}

TEST(Contamination, EndpointsAndRowCount) {
  const auto clean = onewall(0.5, 30);
  GridSpec forest;
  forest.kind = ObstacleKind::kForest;
  auto fenv = grid_world_generator(forest, 5);
  Rng rng(6);
  std::vector<World> dirty;
  for (int i = 0; i < 30; ++i) dirty.push_back(fenv.distribution.sample(rng));
  const auto exp = Experience::from_worlds(clean.train);
  const std::vector<double> grid{0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const auto rows = contamination_series(clean.graph, clean.test, dirty, grid, "failfast", exp, 4);
  ASSERT_EQ(rows.size(), 6u);
  const auto on_clean = evaluate_selectors(clean.graph, clean.test, {"failfast"}, exp, 30, 4);
  const auto on_dirty = evaluate_selectors(clean.graph, dirty, {"failfast"}, exp, 30, 4);
  EXPECT_EQ(rows.front().report.evaluations, on_clean.rows[0].evaluations);
  EXPECT_EQ(rows.back().report.evaluations, on_dirty.rows[0].evaluations);
  EXPECT_EQ(contaminated_worlds(clean.test, dirty, 0.2)[5], dirty[5]);
  EXPECT_EQ(contaminated_worlds(clean.test, dirty, 0.2)[6], clean.test[6]);
  EXPECT_THROW(contaminated_worlds(clean.test, std::vector<World>(3, World(clean.graph.edge_count())), 0.5),
               std::invalid_argument);
  EXPECT_THROW(contaminated_worlds(clean.test, dirty, 1.5), std::invalid_argument);
}

TEST(Evaluate, EpisodeIUsesWorldIModN) {
  const auto g = diamond();
  const std::vector<World> ws{World(4), world_without(4, {kAG})};
  const auto evals = run_episodes(g, ws, selector_factory("forward", nullptr), 5, 0);
  EXPECT_EQ(evals, (std::vector<std::size_t>{2, 4, 2, 4, 2}));
}
