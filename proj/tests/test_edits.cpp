#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace editwalk;

namespace {

Edit E(std::size_t m, const char* text) { return parse_edit(m, text); }

}  // namespace

TEST(Edit, SimpleEdits) {
  auto x = simple_edit(2, 0, Sign::plus);
  EXPECT_EQ(x.sign(0), Sign::plus);
  EXPECT_EQ(x.support(), EdgeSet(2, {0}));
  EXPECT_EQ(simple_edit(2, 1, Sign::minus).sign(1), Sign::minus);
  EXPECT_THROW(simple_edit(2, 7, Sign::plus), Error);
}

TEST(Edit, ComposeExamples) {
  EXPECT_EQ(compose(E(1, "+0"), E(1, "-0")), E(1, "+0"));
  EXPECT_EQ(compose(identity_edit(3), E(3, "+0 -2")), E(3, "+0 -2"));
  EXPECT_EQ(compose(E(3, "+0 -1"), E(3, "+1 -2")), E(3, "+0 -1 -2"));
  EXPECT_THROW(compose(E(2, "+0"), E(3, "+0")), Error);
}

TEST(Edit, ApplyExamples) {
  EXPECT_EQ(apply(E(2, "+0"), EdgeSet(2)), EdgeSet(2, {0}));
  EXPECT_EQ(apply(E(2, "+0"), EdgeSet(2, {0, 1})), EdgeSet(2, {0, 1}));
  EXPECT_EQ(apply(E(2, "-0 +1"), EdgeSet(2, {0})), EdgeSet(2, {1}));
}

TEST(Edit, SupportOfProductIsUnion) {
  Rng rng(3);
  EXPECT_TRUE(supp(identity_edit(4)).empty());
  EXPECT_EQ(supp(E(3, "+0 -1")), EdgeSet(3, {0, 1}));
  for (int i = 0; i < 200; ++i) {
    auto x = oracle::random_edit(9, rng), y = oracle::random_edit(9, rng);
    EXPECT_EQ(supp(compose(x, y)), supp(x) | supp(y));
  }
}

TEST(Edit, OrderExamples) {
  EXPECT_TRUE(leq(E(2, "+0"), E(2, "+0 -1")));
  EXPECT_FALSE(leq(E(2, "+0"), E(2, "-0 -1")));
  EXPECT_TRUE(prec(E(2, "+0"), E(2, "-0 -1")));
}

TEST(Edit, ParseFormatRoundTrip) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto x = oracle::random_edit(12, rng);
    EXPECT_EQ(parse_edit(12, format_edit(x)), x);
  }
  EXPECT_EQ(format_edit(identity_edit(3)), "id");
  EXPECT_THROW(parse_edit(3, "*1"), Error);
  EXPECT_THROW(parse_edit(3, "+x"), Error);
}

TEST(Edit, Chambers) {
  EXPECT_EQ(chamber_of(EdgeSet(2, {0})), E(2, "+0 -1"));
  for (Mask s = 0; s < 16; ++s) {
    auto state = EdgeSet::from_mask(4, s);
    EXPECT_EQ(state_of(chamber_of(state)), state);
  }
  try {
    state_of(E(2, "+0"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_a_chamber);
  }
}

// Left regular band laws on random edits.
TEST(EditProperty, Idempotent) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    auto x = oracle::random_edit(10, rng);
    EXPECT_EQ(compose(x, x), x);
  }
}

TEST(EditProperty, LeftRegular) {
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    auto x = oracle::random_edit(10, rng), y = oracle::random_edit(10, rng);
    EXPECT_EQ(compose(compose(x, y), x), compose(x, y));
  }
}

TEST(EditProperty, Associative) {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    auto x = oracle::random_edit(8, rng), y = oracle::random_edit(8, rng), z = oracle::random_edit(8, rng);
    EXPECT_EQ(compose(compose(x, y), z), compose(x, compose(y, z)));
  }
}

// Compose is checked against the action: two edits are equal as semigroup
// elements exactly when they act identically on every state, and the
// product must act as "y, then x".
TEST(EditProperty, ComposeMatchesActionOnAllStates) {
  Rng rng(14);
  for (int i = 0; i < 300; ++i) {
    auto x = oracle::random_edit(3, rng), y = oracle::random_edit(3, rng);
    auto xy = compose(x, y);
    for (Mask s = 0; s < 8; ++s) {
      auto state = EdgeSet::from_mask(3, s);
      EXPECT_EQ(apply(xy, state), apply(x, apply(y, state)));
    }
  }
  // the documented example, checked by its action alone
  auto x = E(3, "+0 -1"), y = E(3, "+1 -2");
  for (Mask s = 0; s < 8; ++s) {
    auto state = EdgeSet::from_mask(3, s);
    EXPECT_EQ(apply(x, apply(y, state)), apply(E(3, "+0 -1 -2"), state));
  }
}

TEST(EditProperty, ActionCompatibleOnLargeHosts) {
  Rng rng(15);
  for (int i = 0; i < 200; ++i) {
    auto x = oracle::random_edit(150, rng), y = oracle::random_edit(150, rng);
    EdgeSet state(150);
    for (std::size_t e = 0; e < 150; ++e)
      if (rng.below(2)) state.insert(e);
    EXPECT_EQ(apply(compose(x, y), state), apply(x, apply(y, state)));
  }
}

TEST(EditProperty, LeqIffProductAbsorbs) {
  Rng rng(16);
  int positives = 0;
  for (int i = 0; i < 500; ++i) {
    auto x = oracle::random_edit(4, rng), y = oracle::random_edit(4, rng);
    if (i % 2 == 0) y = compose(y, x);  // make half the pairs comparable
    const bool absorbs = compose(x, y) == y;
    EXPECT_EQ(leq(x, y), absorbs);
    positives += absorbs;
  }
  EXPECT_GT(positives, 100);
}

TEST(EditProperty, PrecIffSupportsNest) {
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    auto x = oracle::random_edit(4, rng), y = oracle::random_edit(4, rng);
    EXPECT_EQ(prec(x, y), compose(y, x) == y);
  }
}

TEST(Weights, SimpleExample) {
  std::vector<Rational> p{Rational(1, 4), Rational(1, 4)};
  auto w = simple_edit_weights<Rational>(path_graph(3), p);
  EXPECT_EQ(w.weight_of(E(2, "+0")), Rational(1, 8));
  EXPECT_EQ(w.weight_of(E(2, "-0")), Rational(3, 8));
  EXPECT_EQ(w.weight_of(E(2, "+1")), Rational(1, 8));
  EXPECT_EQ(w.weight_of(E(2, "-1")), Rational(3, 8));
  EXPECT_EQ(w.items().size(), 4u);
}

TEST(Weights, SimpleRejectsClosedEndpoints) {
  std::vector<double> p{1.0, 0.5};
  try {
    simple_edit_weights<double>(path_graph(3), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::probability_out_of_range);
  }
  std::vector<double> short_p{0.5};
  EXPECT_THROW(simple_edit_weights<double>(path_graph(3), short_p), Error);
}

TEST(Weights, SimpleTotalIsExactlyOne) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = complete_graph(2 + rng.below(4));
    std::vector<Rational> p;
    for (std::size_t e = 0; e < g.edge_count(); ++e) p.emplace_back(1 + rng.below(98), 99);
    auto w = simple_edit_weights<Rational>(g, p);
    Rational total = 0;
    for (const auto& it : w.items()) total += it.weight;
    EXPECT_EQ(total, 1);
  }
}

TEST(Weights, MoranEdits) {
  auto g = complete_graph(4);
  auto w = moran_weights<Rational>(g);
  EXPECT_EQ(w.items().size(), 12u);
  for (const auto& it : w.items()) EXPECT_EQ(it.weight, Rational(1, 12));
  const auto e01 = g.edge_index(0, 1), e02 = g.edge_index(0, 2), e03 = g.edge_index(0, 3);
  EdgeSet plus(6, {e01}), minus(6, {e02, e03});
  EXPECT_EQ(w.weight_of(Edit(plus, minus)), Rational(1, 12));
  EXPECT_EQ(supp(Edit(plus, minus)), g.neighborhood_edges(0));

  auto path = path_graph(3);
  auto pw = moran_weights<Rational>(path);
  EXPECT_EQ(pw.weight_of(E(2, "+0 -1")), Rational(1, 4));  // oriented (1, 0)
}

TEST(Weights, MoranSupportsAreNeighborhoods) {
  for (const auto& g : {complete_graph(5), cycle_graph(5), complete_bipartite(2, 3)}) {
    auto w = moran_weights<double>(g);
    for (const auto& it : w.items()) {
      bool found = false;
      for (Vertex v = 0; v < g.vertex_count(); ++v) found = found || supp(it.edit) == g.neighborhood_edges(v);
      EXPECT_TRUE(found);
      // the added edge is the only + sign and lies in that neighborhood
      EXPECT_EQ(it.edit.plus().count(), 1u);
    }
  }
}

TEST(Weights, IntersectionExample) {
  std::vector<Rational> mu{Rational(1, 4), Rational(1, 2), Rational(1, 4)};
  auto w = intersection_weights<Rational>(2, 2, mu);
  auto g = intersection_host(2, 2);
  std::vector<char> one{1, 0};
  EXPECT_EQ(w.weight_of(intersection_edit(g, 2, 2, 0, one)), Rational(1, 8));
  Rational total = 0;
  for (const auto& it : w.items()) total += it.weight;
  EXPECT_EQ(total, 1);
  EXPECT_EQ(w.items().size(), 8u);
}

TEST(Weights, IntersectionPointMassAtZeroEmptiesTheGraph) {
  std::vector<double> mu{1.0, 0.0, 0.0};
  auto w = intersection_weights<double>(2, 2, mu);
  for (const auto& it : w.items()) EXPECT_TRUE(it.edit.plus().empty());
  auto P = build_chain(w, intersection_host(2, 2), Restrict::recurrent);
  ASSERT_EQ(P.size(), 1u);
  EXPECT_EQ(P.state_mask(0), 0u);
}

TEST(Weights, IntersectionRejectsBadMu) {
  std::vector<double> mu{0.5, 0.6};
  EXPECT_THROW(intersection_weights<double>(2, 1, mu), Error);
  std::vector<double> wrong_len{1.0};
  EXPECT_THROW(intersection_weights<double>(2, 1, wrong_len), Error);
}

TEST(Weights, RandomGraphPresets) {
  auto g = complete_graph(4);
  auto er = erdos_renyi_probabilities<double>(g, 0.3);
  EXPECT_EQ(er, std::vector<double>(6, 0.3));
  std::vector<std::size_t> blocks{0, 0, 1, 1};
  auto sbm = stochastic_block_probabilities<double>(g, blocks, 0.8, 0.1);
  for (std::size_t e = 0; e < 6; ++e) {
    const bool same = blocks[g.edges()[e].u] == blocks[g.edges()[e].v];
    EXPECT_DOUBLE_EQ(sbm[e], same ? 0.8 : 0.1);
  }
  std::vector<double> k{1.0, 1.0, 2.0, 2.0};
  auto cl = chung_lu_probabilities<double>(g, k);
  EXPECT_DOUBLE_EQ(cl[g.edge_index(0, 1)], 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(cl[g.edge_index(2, 3)], 4.0 / 6.0);
}
