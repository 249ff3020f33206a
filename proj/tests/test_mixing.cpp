#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace editwalk;

TEST(Tv, Basics) {
  std::vector<double> mu{0.2, 0.3, 0.5};
  EXPECT_EQ(tv_distance(mu, mu), 0.0);
  std::vector<Rational> x{1, 0}, y{0, 1};
  EXPECT_EQ(tv_distance(x, y), 1);
  std::vector<double> shorter{1.0};
  try {
    (void)tv_distance(mu, shorter);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::length_mismatch);
  }
}

TEST(Tv, ExactDecayInRationalMode) {
  // from ab at p = 1/2: the distribution after one step is (1/2, 1/4, 1/4, 0)
  std::vector<Rational> p{Rational(1, 2), Rational(1, 2)};
  auto g = path_graph(3);
  auto P = build_chain(simple_edit_weights<Rational>(g, p), g);
  auto pi = stationary_closed_form<Rational>(p);
  auto tv = tv_decay<Rational>(P, 3, pi, 3);
  EXPECT_EQ(tv[0], Rational(3, 4));
  EXPECT_EQ(tv[1], Rational(1, 4));
  for (std::size_t t = 1; t < tv.size(); ++t) EXPECT_LE(tv[t], tv[t - 1]);
}

TEST(MixingBounds, Formulas) {
  EXPECT_EQ(mixing_bound_simple(2, 1.0), 5u);
  EXPECT_EQ(mixing_bound_simple(4, 3.0), static_cast<std::uint64_t>(std::ceil(4 * (3 + 2 * std::log(4.0)))));
  EXPECT_EQ(simple_tail_start(4), static_cast<std::size_t>(std::ceil(8 * std::log(4.0))));
  EXPECT_DOUBLE_EQ(simple_tail_bound(4, 10), 8 * std::pow(0.75, 10));
  EXPECT_EQ(moran_complete_mixing_bound(4, 1.0), 14u);
  EXPECT_EQ(intersection_mixing_bound(2, 3, 1.0), static_cast<std::uint64_t>(std::ceil(12 * std::log(2.0) + 2)));
  EXPECT_EQ(moran_general_mixing_bound(6, 3, 1.0), static_cast<std::uint64_t>(std::ceil((36 * std::log(2.0) + 6) / 3)));
  EXPECT_EQ(mixing_bound_compound(0.5, 6, 1.0, 37.0), 10u);
  EXPECT_EQ(mixing_bound_compound(0.5, 6, 1.0), static_cast<std::uint64_t>(std::ceil(2 * (6 * std::log(2.0) + 1))));
}

TEST(MixingBounds, Errors) {
  try {
    (void)mixing_bound_compound(1.0, 4, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate_gap);
  }
  EXPECT_THROW((void)mixing_bound_simple(4, 0.0), Error);
  EXPECT_THROW((void)mixing_bound_simple(0, 1.0), Error);
}

TEST(MixingBounds, SimpleTailAndThreshold) {
  Rng rng(41);
  for (std::size_t m : {4u, 6u}) {
    std::vector<double> p;
    for (std::size_t e = 0; e < m; ++e) p.push_back(0.1 + 0.8 * rng.uniform());
    auto g = path_graph(m + 1);
    auto P = build_chain(simple_edit_weights<double>(g, p), g);
    auto pi = stationary_closed_form<double>(p);
    const std::size_t t_max = mixing_bound_simple(m, 3.0);
    for (int k = 0; k < 4; ++k) {
      const Mask start = rng.below(std::uint64_t{1} << m);
      auto tv = tv_decay<double>(P, start, pi, t_max);
      for (std::size_t t = simple_tail_start(m); t <= t_max; ++t) EXPECT_LE(tv[t], simple_tail_bound(m, t));
      for (double c : {1.0, 3.0}) EXPECT_LE(tv[mixing_bound_simple(m, c)], std::exp(-c));
      auto brown = eigenvalues_simple<double>(m);
      for (std::size_t t = 1; t <= t_max; ++t) EXPECT_LE(tv[t], brown_bound(brown, t) + 1e-15);
    }
  }
}

TEST(MixingBounds, MoranK4FromEveryChamber) {
  auto g = complete_graph(4);
  auto w = moran_weights<double>(g);
  auto rep = spectrum(w, g);
  const double ls = lambda_star(rep);
  EXPECT_DOUBLE_EQ(ls, 0.5);
  auto P = build_chain(w, g, Restrict::recurrent);
  auto pi = stationary_numeric(P);
  for (double c : {1.0, 3.0}) {
    const auto t = mixing_bound_compound(ls, 6, c, static_cast<double>(rep.chamber_count));
    for (Mask start : P.states()) {
      auto tv = tv_decay<double>(P, start, pi, t);
      EXPECT_LE(tv[t], std::exp(-c));
      for (std::size_t s = 1; s <= t; ++s) EXPECT_LE(tv[s], brown_bound(rep, s) + 1e-12);
    }
  }
}
