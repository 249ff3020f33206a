#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace editwalk;

TEST(Commute, PathExampleAtOneHalf) {
  std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  auto C = [&](Mask a, Mask b) { return commute_time_closed_form<Rational>(a, b, p); };
  // masks: ab = 3, a = 1, b = 2, ∅ = 0
  EXPECT_EQ(C(3, 0), 16);
  EXPECT_EQ(C(3, 1), 12);
  EXPECT_EQ(C(3, 2), 12);
  EXPECT_EQ(C(1, 2), 16);
  EXPECT_EQ(C(1, 0), 12);
  EXPECT_EQ(C(2, 0), 12);
  for (Mask s = 0; s < 4; ++s) EXPECT_EQ(C(s, s), 0);
}

TEST(Commute, PathExampleSymbolic) {
  // C(ab, ∅) = 1/(p²(1−p)²), C(ab, a) = (1+p)/(p²(1−p)), C(a, b) = 4/(p(1−p))
  // hold at p = 1/2; check the closed form against the linear solve at other p.
  for (const Rational& p : {Rational(1, 4), Rational(2, 3)}) {
    std::vector<Rational> ps{p, p};
    auto g = path_graph(3);
    auto P = build_chain(simple_edit_weights<Rational>(g, ps), g);
    for (Mask a = 0; a < 4; ++a)
      for (Mask b = 0; b < 4; ++b)
        EXPECT_EQ(commute_time_closed_form<Rational>(a, b, ps), a == b ? Rational(0) : commute_time_linear(P, a, b));
  }
}

TEST(Commute, ClosedFormMatchesLinearSolveExactly) {
  std::vector<Rational> p{Rational(1, 3), Rational(3, 5), Rational(1, 7)};
  auto g = path_graph(4);
  auto P = build_chain(simple_edit_weights<Rational>(g, p), g);
  for (Mask a = 0; a < 8; ++a)
    for (Mask b = a + 1; b < 8; ++b) EXPECT_EQ(commute_time_closed_form<Rational>(a, b, p), commute_time_linear(P, a, b));
}

TEST(Commute, BackendsAgree) {
  Rng rng(51);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t m = 2 + rng.below(7);
    std::vector<double> p;
    for (std::size_t e = 0; e < m; ++e) p.push_back(0.1 + 0.8 * rng.uniform());
    auto g = path_graph(m + 1);
    auto P = build_chain(simple_edit_weights<double>(g, p), g);
    SpectralHitting sh(P);
    for (int k = 0; k < 10; ++k) {
      const Mask a = rng.below(P.size()), b = rng.below(P.size());
      const double closed = commute_time_closed_form<double>(a, b, p);
      const double linear = a == b ? 0.0 : commute_time_linear(P, a, b);
      const double spectral = sh.commute_time(a, b);
      const double scale = std::max(1.0, std::fabs(linear));
      EXPECT_LT(std::fabs(closed - linear) / scale, 1e-8);
      EXPECT_LT(std::fabs(spectral - linear) / scale, 1e-8);
    }
  }
}

TEST(Commute, SpectralHittingTimesOnMoranAreRejected) {
  // the Moran chain is not reversible, so the eigen-expansion does not apply
  auto g = complete_graph(4);
  auto P = build_chain(moran_weights<double>(g), g, Restrict::recurrent);
  try {
    SpectralHitting sh(P);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_reversible);
  }
  // the linear solve still works
  EXPECT_GT(commute_time_linear(P, P.state_mask(0), P.state_mask(1)), 0.0);
}

TEST(Commute, HittingTimeToSelfIsZero) {
  std::vector<double> p{0.3, 0.6};
  auto g = path_graph(3);
  auto P = build_chain(simple_edit_weights<double>(g, p), g);
  for (std::size_t y = 0; y < 4; ++y) EXPECT_EQ(hitting_times_to(P, y)[y], 0.0);
  SpectralHitting sh(P);
  for (std::size_t y = 0; y < 4; ++y) EXPECT_NEAR(sh.hitting_time(y, y), 0.0, 1e-12);
}

// The terms that vanish identically are those whose subset T covers E △ F.
TEST(CommuteTerms, CoveringTermsVanish) {
  std::vector<Rational> p{Rational(1, 3), Rational(2, 5), Rational(3, 4), Rational(1, 6)};
  for (Mask a = 0; a < 16; ++a)
    for (Mask b = 0; b < 16; ++b)
      for (const auto& term : commute_terms<Rational>(a, b, p))
        if (term.covers_difference) {
          EXPECT_EQ(term.value, 0);
        }
}

// Dropping the terms with T ∩ (E △ F) = ∅ instead would be wrong: on the path
// with p = 1/2, C(ab, a) = 12 but the only such term with T ≠ 𝓔 is zero.
TEST(CommuteTerms, DisjointTermsDoNotVanish) {
  std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  Rational kept = 0, disjoint_total = 0;
  for (const auto& term : commute_terms<Rational>(3, 1, p)) {
    if (!term.misses_difference) kept += term.value;
    else disjoint_total += term.value;
  }
  EXPECT_EQ(kept, 0);
  EXPECT_EQ(disjoint_total, 12);
  EXPECT_EQ(commute_time_closed_form<Rational>(3, 1, p), 12);
}
