#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace editwalk;

namespace {

// The displayed path example in (ab, a, b, ∅) order, as a function of p.
std::vector<Rational> path_matrix(const Rational& p) {
  const Rational q = 1 - p;
  return {p,     q / 2, q / 2, 0,      //
          p / 2, Rational(1, 2), 0,    q / 2,  //
          p / 2, 0,     Rational(1, 2), q / 2,  //
          0,     p / 2, p / 2, q};
}

}  // namespace

TEST(Chain, PathExampleExact) {
  for (const Rational& p : {Rational(1, 4), Rational(1, 3), Rational(2, 5), Rational(1, 2)}) {
    std::vector<Rational> ps{p, p};
    auto w = simple_edit_weights<Rational>(path_graph(3), ps);
    auto P = build_chain(w, path_graph(3));
    auto order = chamber_notation_order(2);
    EXPECT_EQ(dense_in_order(P, std::span<const Mask>(order)), path_matrix(p)) << p;
  }
}

TEST(Chain, ChamberNotationOrder) {
  EXPECT_EQ(chamber_notation_order(2), (std::vector<Mask>{3, 1, 2, 0}));
  auto o = chamber_notation_order(3);
  EXPECT_EQ(o.front(), 7u);
  EXPECT_EQ(o.back(), 0u);
  std::vector<Mask> sorted = o;
  std::sort(sorted.begin(), sorted.end());
  for (Mask s = 0; s < 8; ++s) EXPECT_EQ(sorted[s], s);
}

TEST(Chain, MatchesBruteForceConstruction) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.below(2);
    auto g = complete_graph(n);
    std::vector<Rational> p;
    for (std::size_t e = 0; e < g.edge_count(); ++e) p.emplace_back(1 + rng.below(9), 10);
    auto w = simple_edit_weights<Rational>(g, p);
    EXPECT_EQ(build_chain(w, g).dense(), oracle::brute_chain(w));
  }
  auto g = complete_graph(4);
  auto moran = moran_weights<Rational>(g);
  EXPECT_EQ(build_chain(moran, g).dense(), oracle::brute_chain(moran));
}

TEST(Chain, RowsSumToOneExactly) {
  auto g = complete_graph(4);
  for (const auto& P : {build_chain(moran_weights<Rational>(g), g),
                        build_chain(moran_weights<Rational>(g), g, Restrict::recurrent)}) {
    for (const auto& s : P.row_sums()) EXPECT_EQ(s, 1);
  }
}

TEST(Chain, LargeChainIsThreadedAndStochastic) {
  // 2^15 states crosses the threaded row-building threshold
  std::vector<double> p(15, 0.3);
  auto g = path_graph(16);
  auto w = simple_edit_weights<double>(g, p);
  auto P = build_chain(w, g);
  ASSERT_EQ(P.size(), std::size_t{1} << 15);
  for (double s : P.row_sums()) ASSERT_NEAR(s, 1.0, 1e-12);
  // spot-check rows against direct application
  for (Mask s : {Mask{0}, Mask{12345}, Mask{32767}}) {
    std::vector<double> row(P.size(), 0.0);
    for (const auto& it : w.items()) row[apply(it.edit, EdgeSet::from_mask(15, s)).mask()] += it.weight;
    for (const auto& e : P.row(s)) EXPECT_NEAR(e.value, row[e.col], 1e-15);
  }
}

// Transition counts of the edge-picking description of the simple process,
// simulated with an unrelated RNG, against the built matrix.
TEST(Chain, DirectSimulationOracle) {
  const std::vector<double> p{0.2, 0.5, 0.7};
  auto g = path_graph(4);
  auto P = build_chain(simple_edit_weights<double>(g, p), g);
  std::mt19937_64 gen(123456);
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<double> counts(64, 0.0), visits(8, 0.0);
  unsigned state = 0;
  const int steps = 1000000;
  for (int t = 0; t < steps; ++t) {
    const int e = pick(gen);
    unsigned next = coin(gen) < p[e] ? state | (1u << e) : state & ~(1u << e);
    counts[state * 8 + next] += 1;
    visits[state] += 1;
    state = next;
  }
  for (unsigned i = 0; i < 8; ++i) {
    for (unsigned j = 0; j < 8; ++j) {
      const double expected = P.at(i, j);
      const double observed = counts[i * 8 + j] / visits[i];
      const double sigma = std::sqrt(expected * (1 - expected) / visits[i]);
      EXPECT_LE(std::fabs(observed - expected), 3 * sigma + 1e-12) << i << "->" << j;
    }
  }
}

TEST(Chain, SimpleRecurrentClassIsEverything) {
  std::vector<double> p(4, 0.3);
  auto g = path_graph(5);
  auto rc = recurrent_class(simple_edit_weights<double>(g, p), g, EdgeSet(4));
  EXPECT_EQ(rc.states.size(), 16u);
  EXPECT_TRUE(rc.covers_host());
}

TEST(Chain, MoranK4RecurrentClassIsForests) {
  auto g = complete_graph(4);
  auto w = moran_weights<double>(g);
  auto rc = recurrent_class(w, g, g.all_edges());
  ASSERT_EQ(rc.states.size(), 37u);  // 38 forests of K_4 minus the empty graph
  std::unordered_set<Mask> in_class(rc.states.begin(), rc.states.end());
  for (Mask s : rc.states) {
    auto state = EdgeSet::from_mask(6, s);
    EXPECT_TRUE(oracle::acyclic(g, state)) << state.to_hex();
    EXPECT_GT(state.count(), 0u);
    for (const auto& it : w.items()) EXPECT_TRUE(in_class.contains(apply(it.edit, state).mask()));
  }
  // same class from any start
  EXPECT_EQ(recurrent_class(w, g, EdgeSet(6)).states, rc.states);
}

TEST(Chain, AllMinusGeneratorCollapsesToEmpty) {
  auto w = WeightedEdits<double>::from_items(3, {{parse_edit(3, "-0 -1 -2"), 1.0}});
  auto rc = recurrent_class(w, path_graph(4), EdgeSet::full(3));
  EXPECT_EQ(rc.states, std::vector<Mask>{0});
}

TEST(Chain, UntouchedEdgesFreezeOrFail) {
  auto w = WeightedEdits<double>::from_items(3, {{parse_edit(3, "+0"), 0.5}, {parse_edit(3, "-0 +1"), 0.5}});
  auto g = path_graph(4);
  auto rc = recurrent_class(w, g, EdgeSet(3, {2}));
  EXPECT_EQ(rc.frozen_edges, EdgeSet(3, {2}));
  for (Mask s : rc.states) EXPECT_TRUE(s & 4u);
  try {
    recurrent_class(w, g, EdgeSet(3), CoveragePolicy::strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::support_not_covering);
  }
}

TEST(Chain, Caps) {
  std::vector<double> p(21, 0.5);
  auto g = path_graph(22);
  auto w = simple_edit_weights<double>(g, p);
  try {
    build_chain(w, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::cap_exceeded);
  }
  std::vector<double> small(5, 0.5);
  auto g5 = path_graph(6);
  EXPECT_THROW(build_chain(simple_edit_weights<double>(g5, small), g5, Restrict::all, 16), Error);
  auto mw = moran_weights<double>(complete_graph(4));
  EXPECT_THROW(build_chain(mw, complete_graph(4), Restrict::recurrent, 10), Error);
}

TEST(Chain, IndexLookup) {
  auto g = complete_graph(4);
  auto P = build_chain(moran_weights<double>(g), g, Restrict::recurrent);
  for (std::size_t i = 0; i < P.size(); ++i) EXPECT_EQ(P.index_of(P.state_mask(i)), i);
  EXPECT_FALSE(P.index_of(0x3f).has_value());
  try {
    (void)P.require_index(0x3f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_a_chamber);
  }
}

TEST(Chain, LeftMultiplyMatchesDense) {
  std::vector<Rational> p{Rational(1, 3), Rational(3, 4), Rational(1, 5)};
  auto g = path_graph(4);
  auto P = build_chain(simple_edit_weights<Rational>(g, p), g);
  auto D = P.dense();
  std::vector<Rational> v{1, 2, 3, 4, 5, 6, 7, 8};
  auto out = P.left_multiply(std::span<const Rational>(v));
  for (std::size_t j = 0; j < 8; ++j) {
    Rational acc = 0;
    for (std::size_t i = 0; i < 8; ++i) acc += v[i] * D[i * 8 + j];
    EXPECT_EQ(out[j], acc);
  }
}
