#include <gtest/gtest.h>

#include <random>

#include "lazysp/graph.hpp"
#include "test_util.hpp"

using namespace lazysp;
using namespace lazysp::testing;

TEST(ShortestPath, DiamondPrefersShorterSide) {
  const auto g = diamond();
  const auto p = shortest_path(g);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->vertices, (std::vector<VertexId>{0, 1, 3}));
  EXPECT_DOUBLE_EQ(p->length, 2.0);
}

TEST(ShortestPath, DiamondWithExcludedEdge) {
  const auto g = diamond();
  EdgeSet ex(4);
  ex.insert(kAG);
  const auto p = shortest_path(g, ex);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->vertices, (std::vector<VertexId>{0, 2, 3}));
  EXPECT_NEAR(p->length, 2.2, 1e-12);
}

TEST(ShortestPath, UnreachableGivesNone) {
  const ExplicitGraph g({0, 1}, {{0, 0, 1, 5.0}}, 0, 1);
  EdgeSet ex(1);
  ex.insert(0);
  EXPECT_FALSE(shortest_path(g, ex));
}

TEST(ShortestPath, TieBreakIsLexicographicByEdgeId) {
  // two equal routes; the one through the smaller first edge id wins even
  // though it is listed second in the adjacency of the start
  const ExplicitGraph g({0, 1, 2, 3}, {{0, 2, 3, 1.0}, {1, 0, 2, 1.0}, {2, 1, 3, 1.0}, {3, 0, 1, 1.0}}, 0, 3);
  const auto p = shortest_path(g);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->edges, (std::vector<EdgeId>{1, 0}));
}

TEST(ShortestPath, TieBreakMatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_graph(rng, 7, 11);
    const auto paths = all_simple_paths(g);
    double best = kInfinity;
    for (const auto& p : paths) best = std::min(best, length_of(g, p.edges));
    std::vector<EdgeId> lex;
    bool have = false;
    for (const auto& p : paths)
      if (lengths_equal(length_of(g, p.edges), best) && (!have || p.edges < lex)) {
        lex = p.edges;
        have = true;
      }
    const auto sp = shortest_path(g);
    ASSERT_TRUE(sp);
    EXPECT_EQ(sp->edges, lex);
    EXPECT_DOUBLE_EQ(sp->length, length_of(g, sp->edges));
  }
}

TEST(ShortestPath, MonotoneUnderExclusion) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_graph(rng, 10, 20);
    EdgeSet ex(g.edge_count());
    double last = shortest_path(g, ex)->length;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      ex.insert(e);
      const auto p = shortest_path(g, ex);
      if (!p) break;
      EXPECT_GE(p->length, last - 1e-12);
      last = p->length;
    }
  }
}

TEST(EnumeratePaths, DiamondBounds) {
  const auto g = diamond();
  EdgeSet none(4);
  EXPECT_EQ(enumerate_paths_shorter_than(g, 2.2, none).size(), 2u);
  EXPECT_TRUE(enumerate_paths_shorter_than(g, 1.9, none).empty());
  EdgeSet ex(4);
  ex.insert(kSB);
  const auto only = enumerate_paths_shorter_than(g, 2.2, ex);
  ASSERT_EQ(only.size(), 1u);
  EXPECT_EQ(only[0].vertices, (std::vector<VertexId>{0, 1, 3}));
}

TEST(EnumeratePaths, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_graph(rng, 7, 12);
    const double bound = 0.5 * static_cast<double>(rng() % 20);
    std::size_t expect = 0;
    for (const auto& p : all_simple_paths(g))
      if (length_at_most(length_of(g, p.edges), bound)) ++expect;
    EXPECT_EQ(enumerate_paths_shorter_than(g, bound, EdgeSet(g.edge_count())).size(), expect);
  }
}

TEST(EnumeratePaths, CapAndBoundErrors) {
  const auto g = diamond();
  EXPECT_THROW(enumerate_paths_shorter_than(g, 10.0, EdgeSet(4), 1), PathCapExceeded);
  EXPECT_THROW(enumerate_paths_shorter_than(g, kInfinity, EdgeSet(4)), std::invalid_argument);
}

TEST(ExplicitGraph, RejectsBadInput) {
  EXPECT_THROW(ExplicitGraph({0, 1}, {{0, 0, 1, 0.0}}, 0, 1), GraphError);
  EXPECT_THROW(ExplicitGraph({0, 1}, {{0, 0, 1, -1.0}}, 0, 1), GraphError);
  EXPECT_THROW(ExplicitGraph({0, 1}, {{0, 0, 1, 1.0}}, 0, 0), GraphError);
  EXPECT_THROW(ExplicitGraph({0, 1}, {{1, 0, 1, 1.0}}, 0, 1), GraphError);
  EXPECT_THROW(ExplicitGraph({0, 1}, {{0, 0, 0, 1.0}}, 0, 1), GraphError);
  EXPECT_THROW(ExplicitGraph({0, 1}, {{0, 0, 7, 1.0}}, 0, 1), GraphError);
  EXPECT_THROW(ExplicitGraph({0, 0}, {}, 0, 1), GraphError);
}

TEST(ExplicitGraph, UndirectedArcsAndHash) {
  const auto g = diamond();
  EXPECT_EQ(g.find_edge(3, 1), std::optional<EdgeId>(kAG));
  EXPECT_FALSE(g.find_edge(1, 2));
  EXPECT_NEAR(g.total_length(), 4.2, 1e-12);
  EXPECT_EQ(g.hash(), diamond().hash());
  const ExplicitGraph other({0, 1, 2, 3}, {{0, 0, 1, 1.0}, {1, 1, 3, 1.0}, {2, 0, 2, 1.1}, {3, 2, 3, 1.2}}, 0, 3);
  EXPECT_NE(g.hash(), other.hash());
}
