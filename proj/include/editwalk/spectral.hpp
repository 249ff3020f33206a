#pragma once

// Closed-form stationary laws, eigenvalues and eigenvectors of edit processes.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "editwalk/chain.hpp"
#include "editwalk/edge_set.hpp"
#include "editwalk/edit.hpp"
#include "editwalk/error.hpp"
#include "editwalk/host_graph.hpp"
#include "editwalk/lattice.hpp"
#include "editwalk/linalg.hpp"
#include "editwalk/scalar.hpp"
#include "editwalk/weights.hpp"

namespace editwalk {

namespace detail {

inline void check_enumerable(std::size_t m) {
  if (m > 20) fail(Errc::cap_exceeded, "vectors over 2^m states need m <= 20, got m = " + std::to_string(m));
}

}  // namespace detail

/// π(E) = ∏_{e∈E} p_e ∏_{e∉E} (1 − p_e), indexed by bitmask.
template <Scalar S>
std::vector<S> stationary_closed_form(std::span<const S> p) {
  const std::size_t m = p.size();
  detail::check_open_unit<S>(p, m);
  detail::check_enumerable(m);
  std::vector<S> pi{S(1)};
  pi.reserve(std::size_t{1} << m);
  for (std::size_t e = 0; e < m; ++e) {
    const std::size_t half = pi.size();
    pi.resize(2 * half);
    for (std::size_t s = 0; s < half; ++s) {
      pi[s + half] = pi[s] * p[e];
      pi[s] *= S(1) - p[e];
    }
  }
  return pi;
}

template <Scalar S>
std::vector<S> stationary_closed_form(const HostGraph& g, std::span<const S> p) {
  if (p.size() != g.edge_count()) fail(Errc::length_mismatch, "one probability per host edge required");
  return stationary_closed_form<S>(p);
}

/// Left fixed vector of P normalized to sum 1, by direct linear solve.
template <Scalar S>
std::vector<S> stationary_numeric(const TransitionMatrix<S>& P) {
  const std::size_t n = P.size();
  auto d = P.dense();
  // rows of A are the equations Σ_i π_i (P_ij − δ_ij) = 0, the last replaced by Σ π = 1
  std::vector<S> a(n * n, S(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[j * n + i] = d[i * n + j] - (i == j ? S(1) : S(0));
  for (std::size_t i = 0; i < n; ++i) a[(n - 1) * n + i] = S(1);
  std::vector<S> b(n, S(0));
  b[n - 1] = S(1);
  auto x = solve<S>(std::move(a), std::move(b));
  if (!x) fail(Errc::not_irreducible, "stationary law is not unique");
  return *x;
}

/// φ_T(E) = (−1)^{|𝓔∖(E∪T)|} ∏_{e∈T∩E} p_e ∏_{e∈T∖E} (1 − p_e), indexed by bitmask.
template <Scalar S>
std::vector<S> phi(const EdgeSet& t, std::span<const S> p) {
  const std::size_t m = p.size();
  if (t.universe() != m) fail(Errc::host_mismatch, "subset over a different host");
  detail::check_enumerable(m);
  const Mask tm = t.mask();
  const Mask full = detail::full_mask(m);
  std::vector<S> out(std::size_t{1} << m);
  for (Mask s = 0; s < out.size(); ++s) {
    S v(1);
    for (std::size_t e = 0; e < m; ++e) {
      const Mask bit = Mask{1} << e;
      if (!(tm & bit)) continue;
      v *= (s & bit) ? p[e] : S(1) - p[e];
    }
    if (std::popcount(full & ~(s | tm)) % 2) v = -v;
    out[s] = v;
  }
  return out;
}

/// ψ_T(E) = φ_T(E) ∏_{e∉T} √(p_e(1−p_e)) / √π(E): orthonormal eigenvectors of Π^{1/2} P Π^{−1/2}.
inline std::vector<double> psi(const EdgeSet& t, std::span<const double> p) {
  auto f = phi<double>(t, p);
  auto pi = stationary_closed_form<double>(p);
  double norm = 1.0;
  for (std::size_t e = 0; e < p.size(); ++e)
    if (!t.contains(e)) norm *= std::sqrt(p[e] * (1.0 - p[e]));
  for (std::size_t s = 0; s < f.size(); ++s) f[s] *= norm / std::sqrt(pi[s]);
  return f;
}

/// Simple process: λ_T = |T|/m for every T ⊆ 𝓔, each with multiplicity one.
template <Scalar S>
SpectrumReport<S> eigenvalues_simple(std::size_t m) {
  if (m == 0) fail(Errc::empty_edge_set, "host has no edges");
  detail::check_enumerable(m);
  SpectrumReport<S> r;
  r.frozen_edges = EdgeSet(m);
  r.chamber_count = std::int64_t{1} << m;
  std::vector<Mask> order(std::size_t{1} << m);
  for (Mask s = 0; s < order.size(); ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(), [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });
  for (Mask s : order) {
    r.entries.push_back({EdgeSet::from_mask(m, s), ratio<S>(std::popcount(s), static_cast<std::int64_t>(m)), 1});
  }
  return r;
}

template <Scalar S>
S eigenvalue(const SupportLattice& lattice, const EdgeSet& x, const WeightedEdits<S>& dist) {
  auto masses = dist.support_masses();
  return eigenvalue<S>(lattice, x, std::span<const SupportMass<S>>(masses));
}

inline SupportLattice support_lattice(const std::vector<EdgeSet>& supports, std::size_t cap = kDefaultFlatCap) {
  return SupportLattice::closure(supports, cap);
}

/// Eigenvalues per flat with Möbius-inverted multiplicities over the chambers
/// of the generated subsemigroup (enumerated as the recurrent class).
template <Scalar S>
SpectrumReport<S> spectrum(const WeightedEdits<S>& dist, const HostGraph& g, const SupportLattice& lattice,
                           std::size_t cap_states = kDefaultStateCap) {
  const std::size_t m = g.edge_count();
  auto rc = recurrent_class(dist, g, EdgeSet(m), CoveragePolicy::freeze, cap_states);
  auto chambers = chamber_edits(rc);
  auto gens = dist.generators();
  auto reps = representatives(lattice, gens);
  auto mult = multiplicities(lattice, chambers, reps);
  auto masses = dist.support_masses();
  SpectrumReport<S> r;
  r.frozen_edges = rc.frozen_edges;
  r.chamber_count = static_cast<std::int64_t>(chambers.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto& x = lattice.flats()[i];
    r.entries.push_back({x, eigenvalue<S>(lattice, x, std::span<const SupportMass<S>>(masses)), mult[i].multiplicity});
  }
  return r;
}

template <Scalar S>
SpectrumReport<S> spectrum(const WeightedEdits<S>& dist, const HostGraph& g,
                           std::size_t cap_states = kDefaultStateCap) {
  return spectrum(dist, g, SupportLattice::closure(dist.generator_supports()), cap_states);
}

/// λ∗ = max λ_X over flats other than the top.
template <Scalar S>
S lambda_star(const SpectrumReport<S>& r) {
  // the top is the unique largest flat
  const EdgeSet* top = nullptr;
  for (const auto& e : r.entries)
    if (!top || e.flat.count() > top->count()) top = &e.flat;
  std::optional<S> best;
  for (const auto& e : r.entries) {
    if (e.flat == *top) continue;
    if (!best || e.eigenvalue > *best) best = e.eigenvalue;
  }
  return best.value_or(S(0));
}

}  // namespace editwalk
