#pragma once

// Oracle checks over a built chain: residuals, orthonormality, reversibility,
// spectrum multisets and commute-time backend agreement.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "editwalk/chain.hpp"
#include "editwalk/commute.hpp"
#include "editwalk/lattice.hpp"
#include "editwalk/linalg.hpp"
#include "editwalk/numeric.hpp"
#include "editwalk/scalar.hpp"
#include "editwalk/spectral.hpp"
#include "editwalk/weights.hpp"

namespace editwalk {

struct Check {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct VerifyReport {
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  double max_residual() const {
    double r = 0.0;
    for (const auto& c : checks) r = std::max(r, c.residual);
    return r;
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct VerifyOptions {
  double identity_tol = 1e-12;
  double gram_tol = 1e-10;
  double spectrum_tol = 1e-8;
  double commute_rel_tol = 1e-8;
  double vanish_tol = 1e-14;
  std::size_t commute_pairs = 20;
  /// Exact rank checks of multiplicities are run up to this many states.
  std::size_t exact_rank_states = 64;
};

namespace detail {

/// Exact mode passes only on an exact zero; double mode uses `tol`.
template <Scalar S>
Check residual_check(std::string name, const S& worst, double tol, std::string note = {}) {
  Check c;
  c.name = std::move(name);
  c.residual = to_double(worst);
  if constexpr (is_exact_v<S>) {
    c.tolerance = 0.0;
    c.passed = worst == 0;
  } else {
    c.tolerance = tol;
    c.passed = worst <= tol;
  }
  c.note = std::move(note);
  return c;
}

template <Scalar S>
S sup_norm_diff(std::span<const S> a, std::span<const S> b) {
  S worst(0);
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, abs_value(S(a[i] - b[i])));
  return worst;
}

template <Scalar S>
TransitionMatrix<double> to_double_chain(const TransitionMatrix<S>& P) {
  if constexpr (std::same_as<S, double>) {
    return P;
  } else {
    auto d = P.dense();
    std::vector<double> dd(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) dd[i] = to_double(d[i]);
    return TransitionMatrix<double>::from_dense(P.universe(), P.states(), dd);
  }
}

template <Scalar S>
Check row_sum_check(const TransitionMatrix<S>& P, double tol) {
  S worst(0);
  for (const auto& r : P.row_sums()) worst = std::max(worst, abs_value(S(r - S(1))));
  return residual_check<S>("row_stochastic", worst, tol);
}

/// Deterministic spread of state pairs for the commute checks.
inline std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n, std::size_t count) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n < 2) return out;
  const std::size_t total = n * (n - 1) / 2;
  const std::size_t step = std::max<std::size_t>(1, total / std::max<std::size_t>(1, count));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n && out.size() < count; ++i)
    for (std::size_t j = i + 1; j < n && out.size() < count; ++j, ++k)
      if (k % step == 0) out.emplace_back(i, j);
  return out;
}

/// dim ker(P − λI) by exact rank, for each distinct λ of the closed form.
template <Scalar S>
Check kernel_dimension_check(const TransitionMatrix<S>& P, const std::vector<std::pair<S, std::int64_t>>& expected) {
  const auto n = P.size();
  auto d = P.dense();
  std::int64_t worst = 0;
  std::string note;
  for (const auto& [lambda, mult] : expected) {
    auto a = d;
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= lambda;
    const auto kernel = static_cast<std::int64_t>(n - rank<S>(std::move(a), n, n));
    const auto gap = std::abs(kernel - mult);
    if (gap > worst) {
      worst = gap;
      note = "eigenvalue " + format_scalar(lambda) + ": kernel " + std::to_string(kernel) + ", expected " +
             std::to_string(mult);
    }
  }
  Check c{"multiplicity_exact_rank", worst == 0, static_cast<double>(worst), 0.0, note};
  return c;
}

}  // namespace detail

/// Checks a simple-process chain against the closed forms for probabilities p.
/// P is taken as given so a perturbed matrix can be fed in as a negative control.
template <Scalar S>
VerifyReport verify_simple_chain(const TransitionMatrix<S>& P, std::span<const S> p, const VerifyOptions& opt = {}) {
  const std::size_t m = p.size();
  if (P.universe() != m || P.size() != (std::size_t{1} << m)) {
    fail(Errc::length_mismatch, "simple-process checks need the full 2^m chain");
  }
  VerifyReport rep;
  rep.checks.push_back(detail::row_sum_check(P, opt.identity_tol));

  const auto pi = stationary_closed_form<S>(p);
  {
    auto pp = P.left_multiply(pi);
    rep.checks.push_back(detail::residual_check<S>(
        "stationary_fixed_point", detail::sup_norm_diff<S>(std::span<const S>(pp), std::span<const S>(pi)),
        opt.identity_tol));
  }
  {
    S worst(0);
    for (std::size_t i = 0; i < P.size(); ++i)
      for (const auto& e : P.row(i))
        worst = std::max(worst, abs_value(S(pi[i] * e.value - pi[e.col] * P.at(e.col, i))));
    rep.checks.push_back(detail::residual_check<S>("detailed_balance", worst, opt.identity_tol));
  }

  // eigenvector residuals and weighted orthogonality of the φ_T
  std::vector<std::vector<S>> phis;
  phis.reserve(P.size());
  {
    S worst(0);
    for (Mask t = 0; t < P.size(); ++t) {
      auto f = phi<S>(EdgeSet::from_mask(m, t), p);
      auto fp = P.left_multiply(f);
      const S lambda = ratio<S>(std::popcount(t), static_cast<std::int64_t>(m));
      for (std::size_t s = 0; s < f.size(); ++s) worst = std::max(worst, abs_value(S(fp[s] - lambda * f[s])));
      phis.push_back(std::move(f));
    }
    rep.checks.push_back(detail::residual_check<S>("eigenvector_residual", worst, opt.identity_tol));
  }
  {
    // ⟨ψ_T, ψ_S⟩ = c_T c_S Σ_E φ_T(E) φ_S(E)/π(E) with c_T = ∏_{e∉T} √(p_e(1−p_e)).
    // Exact mode checks Σ φ_T φ_S/π = δ_TS/c_T², which avoids square roots.
    std::vector<S> c2(P.size(), S(1));
    for (Mask t = 0; t < P.size(); ++t)
      for (std::size_t e = 0; e < m; ++e)
        if (!(t & (Mask{1} << e))) c2[t] *= p[e] * (S(1) - p[e]);
    double worst_d = 0.0;
    S worst_exact(0);
    for (Mask t = 0; t < P.size(); ++t) {
      for (Mask u = t; u < P.size(); ++u) {
        S acc(0);
        for (std::size_t s = 0; s < P.size(); ++s) acc += phis[t][s] * phis[u][s] / pi[s];
        if constexpr (is_exact_v<S>) {
          const S expected = t == u ? S(1) / c2[t] : S(0);
          worst_exact = std::max(worst_exact, abs_value(S(acc - expected)));
        } else {
          const double g = acc * std::sqrt(c2[t] * c2[u]);
          worst_d = std::max(worst_d, std::fabs(g - (t == u ? 1.0 : 0.0)));
        }
      }
    }
    if constexpr (is_exact_v<S>) rep.checks.push_back(detail::residual_check<S>("psi_gram_identity", worst_exact, 0.0));
    else rep.checks.push_back(detail::residual_check<double>("psi_gram_identity", worst_d, opt.gram_tol));
  }

  // Q = Π^{1/2} P Π^{−1/2} symmetric. Exact mode compares squared entries,
  // Q(x,y)² = π(x)P(x,y)²/π(y), which needs no square roots.
  {
    if constexpr (is_exact_v<S>) {
      S worst(0);
      for (std::size_t i = 0; i < P.size(); ++i)
        for (const auto& e : P.row(i)) {
          const S back = P.at(e.col, i);
          worst = std::max(worst, abs_value(S(pi[i] * e.value * e.value / pi[e.col] - pi[e.col] * back * back / pi[i])));
        }
      rep.checks.push_back(detail::residual_check<S>("q_symmetric", worst, 0.0));
    } else {
      double worst = 0.0;
      for (std::size_t i = 0; i < P.size(); ++i)
        for (const auto& e : P.row(i)) {
          const double q1 = std::sqrt(pi[i]) * e.value / std::sqrt(pi[e.col]);
          const double q2 = std::sqrt(pi[e.col]) * P.at(e.col, i) / std::sqrt(pi[i]);
          worst = std::max(worst, std::fabs(q1 - q2));
        }
      rep.checks.push_back(detail::residual_check<double>("q_symmetric", worst, opt.identity_tol));
    }
  }

  const auto closed = eigenvalues_simple<S>(m);
  {
    auto Pd = detail::to_double_chain(P);
    auto num = numeric_eigenvalues(Pd);
    auto match = match_multisets(spectrum_values(closed), num.values, opt.spectrum_tol);
    rep.checks.push_back(Check{"spectrum_multiset", match.ok, match.max_gap, opt.spectrum_tol, match.message});
  }
  if constexpr (is_exact_v<S>) {
    if (P.size() <= opt.exact_rank_states) rep.checks.push_back(detail::kernel_dimension_check(P, closed.aggregated()));
  }

  // commute times: closed form vs first-step linear solves, and vanishing terms
  {
    auto pairs = detail::sample_pairs(P.size(), opt.commute_pairs);
    double worst_rel = 0.0;
    S worst_vanish(0);
    S worst_exact(0);
    std::vector<std::vector<S>> hit_cache(P.size());
    auto hits = [&](std::size_t target) -> const std::vector<S>& {
      if (hit_cache[target].empty()) hit_cache[target] = hitting_times_to(P, target);
      return hit_cache[target];
    };
    for (auto [i, j] : pairs) {
      const Mask a = P.state_mask(i), b = P.state_mask(j);
      auto terms = commute_terms<S>(a, b, p);
      S closed_sum(0);
      for (const auto& t : terms) {
        if (t.covers_difference) worst_vanish = std::max(worst_vanish, abs_value(t.value));
        else closed_sum += t.value;
      }
      const S linear = hits(j)[i] + hits(i)[j];
      if constexpr (is_exact_v<S>) worst_exact = std::max(worst_exact, abs_value(S(closed_sum - linear)));
      const double rel = std::fabs(to_double(closed_sum) - to_double(linear)) / std::max(1.0, std::fabs(to_double(linear)));
      worst_rel = std::max(worst_rel, rel);
    }
    if constexpr (is_exact_v<S>) {
      rep.checks.push_back(detail::residual_check<S>("commute_backends_agree", worst_exact, 0.0,
                                                     std::to_string(pairs.size()) + " pairs"));
    } else {
      rep.checks.push_back(detail::residual_check<double>("commute_backends_agree", worst_rel, opt.commute_rel_tol,
                                                          std::to_string(pairs.size()) + " pairs, relative"));
    }
    rep.checks.push_back(detail::residual_check<S>("commute_covering_terms_vanish", worst_vanish, opt.vanish_tol));
  }
  return rep;
}

template <Scalar S>
VerifyReport verify_simple(const HostGraph& g, std::span<const S> p, const VerifyOptions& opt = {}) {
  auto dist = simple_edit_weights<S>(g, p);
  auto P = build_chain(dist, g, Restrict::all);
  return verify_simple_chain<S>(P, p, opt);
}

/// Checks a compound process on its recurrent class: lattice spectrum against
/// the numeric spectrum, and the multiplicity bookkeeping.
template <Scalar S>
VerifyReport verify_compound(const WeightedEdits<S>& dist, const HostGraph& g, const VerifyOptions& opt = {},
                             std::size_t cap_states = kDefaultStateCap) {
  VerifyReport rep;
  auto P = build_chain(dist, g, Restrict::recurrent, cap_states);
  rep.checks.push_back(detail::row_sum_check(P, opt.identity_tol));

  auto lattice = SupportLattice::closure(dist.generator_supports());
  auto report = spectrum(dist, g, lattice, cap_states);
  {
    const bool ok = report.chamber_count == static_cast<std::int64_t>(P.size());
    rep.checks.push_back(Check{"chamber_count_matches_class", ok,
                               static_cast<double>(std::abs(report.chamber_count - static_cast<std::int64_t>(P.size()))),
                               0.0, std::to_string(report.chamber_count) + " chambers"});
  }
  {
    const auto dim = report.dimension();
    rep.checks.push_back(Check{"multiplicities_sum_to_chambers", dim == report.chamber_count,
                               static_cast<double>(std::abs(dim - report.chamber_count)), 0.0,
                               std::to_string(dim) + " vs " + std::to_string(report.chamber_count)});
    std::int64_t negative = 0;
    for (const auto& e : report.entries)
      if (e.multiplicity < 0) ++negative;
    rep.checks.push_back(Check{"multiplicities_nonnegative", negative == 0, static_cast<double>(negative), 0.0, {}});
  }
  {
    // Σ_{Y ⊇ X} m_Y = c_X for every flat
    auto chambers = chamber_edits(recurrent_class(dist, g, EdgeSet(g.edge_count()), CoveragePolicy::freeze, cap_states));
    auto reps = representatives(lattice, dist.generators());
    auto counts = chamber_counts(lattice, chambers, reps);
    std::int64_t worst = 0;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      std::int64_t acc = 0;
      for (auto j : lattice.upset(i)) acc += report.entries[j].multiplicity;
      worst = std::max(worst, std::abs(acc - counts[i]));
    }
    rep.checks.push_back(Check{"uninverted_counts", worst == 0, static_cast<double>(worst), 0.0, {}});
  }
  {
    const auto& top = lattice.top();
    S top_value(0);
    for (const auto& e : report.entries)
      if (e.flat == top) top_value = e.eigenvalue;
    rep.checks.push_back(detail::residual_check<S>("top_eigenvalue_one", abs_value(S(top_value - S(1))), opt.identity_tol));
  }
  {
    auto num = numeric_eigenvalues(detail::to_double_chain(P));
    auto match = match_multisets(spectrum_values(report), num.values, opt.spectrum_tol);
    rep.checks.push_back(Check{"spectrum_multiset", match.ok, match.max_gap, opt.spectrum_tol, match.message});
  }
  if constexpr (is_exact_v<S>) {
    if (P.size() <= opt.exact_rank_states) rep.checks.push_back(detail::kernel_dimension_check(P, report.aggregated()));
  }
  {
    auto pi = stationary_numeric<S>(P);
    auto pp = P.left_multiply(pi);
    rep.checks.push_back(detail::residual_check<S>(
        "stationary_fixed_point", detail::sup_norm_diff<S>(std::span<const S>(pp), std::span<const S>(pi)),
        opt.identity_tol));
  }
  return rep;
}

}  // namespace editwalk
