#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace editwalk;

TEST(EdgeSet, SetAlgebra) {
  EdgeSet a(70, {0, 3, 65});
  EdgeSet b(70, {3, 4});
  EXPECT_EQ((a | b).count(), 4u);
  EXPECT_EQ((a & b).indices(), std::vector<std::size_t>{3});
  EXPECT_EQ((a - b).indices(), (std::vector<std::size_t>{0, 65}));
  EXPECT_TRUE((a & b).is_subset_of(a));
  EXPECT_EQ(a.complement().count(), 67u);
  EXPECT_TRUE(EdgeSet(70).empty());
  EXPECT_EQ(EdgeSet::full(70).count(), 70u);
}

TEST(EdgeSet, HexRoundTrip) {
  Rng rng(1);
  for (std::size_t m : {1u, 5u, 63u, 64u, 130u}) {
    EdgeSet s(m);
    for (std::size_t e = 0; e < m; ++e)
      if (rng.below(2)) s.insert(e);
    EXPECT_EQ(EdgeSet::from_hex(m, s.to_hex()), s) << m;
  }
  EXPECT_EQ(EdgeSet(4, {0, 1}).to_hex(), "0x3");
}

TEST(EdgeSet, RejectsMixedUniverses) {
  EXPECT_THROW((void)(EdgeSet(3) | EdgeSet(4)), Error);
  EXPECT_THROW(EdgeSet(3).insert(3), Error);
  EXPECT_THROW(EdgeSet::from_mask(2, 0b100), Error);
  EXPECT_THROW(EdgeSet::from_hex(4, "0xzz"), Error);
}

TEST(EdgeSet, MaskViewNeedsSmallUniverse) {
  try {
    (void)EdgeSet(64).mask();
    FAIL() << "expected CapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::cap_exceeded);
  }
}

TEST(HostGraph, Presets) {
  EXPECT_EQ(complete_graph(4).edge_count(), 6u);
  EXPECT_EQ(complete_graph(100).edge_count(), 4950u);
  EXPECT_EQ(complete_bipartite(2, 3).edge_count(), 6u);
  EXPECT_EQ(path_graph(3).edge_count(), 2u);
  EXPECT_EQ(cycle_graph(5).edge_count(), 5u);
  EXPECT_EQ(cycle_graph(5).min_degree(), 2u);
}

TEST(HostGraph, ValidationErrors) {
  auto code_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::parse_error;
  };
  EXPECT_EQ(code_of([] { HostGraph::from_edge_list(3, {{0, 1}, {1, 0}}); }), Errc::duplicate_edge);
  EXPECT_EQ(code_of([] { HostGraph::from_edge_list(3, {{1, 1}}); }), Errc::self_loop);
  EXPECT_EQ(code_of([] { HostGraph::from_edge_list(3, {{0, 3}}); }), Errc::vertex_out_of_range);
  EXPECT_EQ(code_of([] { (void)path_graph(3).edge_index(0, 2); }), Errc::edge_out_of_range);
}

TEST(HostGraph, EdgeIndexIsOrderFree) {
  auto g = HostGraph::from_edge_list(4, {{2, 3}, {1, 0}, {0, 2}});
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edges()[i];
    EXPECT_EQ(g.edge_index(e.u, e.v), i);
    EXPECT_EQ(g.edge_index(e.v, e.u), i);
  }
}

TEST(HostGraph, Neighborhoods) {
  auto g = complete_graph(4);
  for (Vertex v = 0; v < 4; ++v) {
    auto n = g.neighborhood_edges(v);
    EXPECT_EQ(n.count(), 3u);
    n.for_each([&](std::size_t e) { EXPECT_TRUE(g.edges()[e].u == v || g.edges()[e].v == v); });
  }
}

TEST(HostGraph, DigestIsStableAndSensitive) {
  EXPECT_EQ(complete_graph(4).digest(), complete_graph(4).digest());
  EXPECT_NE(complete_graph(4).digest(), cycle_graph(4).digest());
  EXPECT_EQ(HostGraph::from_edge_list(3, {{1, 2}, {0, 1}}).digest(), path_graph(3).digest());
}

TEST(HostGraph, ForestPredicateMatchesCountingOracle) {
  auto g = complete_graph(5);
  Rng rng(9);
  for (int trial = 0; trial < 400; ++trial) {
    EdgeSet s(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (rng.below(3) == 0) s.insert(e);
    EXPECT_EQ(is_forest(g, s), oracle::acyclic(g, s)) << s.to_hex();
  }
  EXPECT_TRUE(is_forest(g, EdgeSet(g.edge_count())));
  EXPECT_FALSE(is_forest(g, g.all_edges()));
}
