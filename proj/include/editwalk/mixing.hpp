#pragma once

// Total variation distance, exact decay curves and mixing-time bounds.
// All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "editwalk/chain.hpp"
#include "editwalk/error.hpp"
#include "editwalk/lattice.hpp"
#include "editwalk/scalar.hpp"

namespace editwalk {

template <Scalar S>
S tv_distance(std::span<const S> mu, std::span<const S> nu) {
  if (mu.size() != nu.size()) fail(Errc::length_mismatch, "distributions over different state counts");
  S acc(0);
  for (std::size_t i = 0; i < mu.size(); ++i) acc += abs_value(S(mu[i] - nu[i]));
  return acc / S(2);
}

template <Scalar S>
S tv_distance(const std::vector<S>& mu, const std::vector<S>& nu) {
  return tv_distance<S>(std::span<const S>(mu), std::span<const S>(nu));
}

/// tv(t) = ‖P^t(E0, ·) − π‖ for t = 0..t_max, by repeated vector-matrix products.
template <Scalar S>
std::vector<S> tv_decay(const TransitionMatrix<S>& P, Mask initial, std::span<const S> pi, std::size_t t_max) {
  if (pi.size() != P.size()) fail(Errc::length_mismatch, "stationary vector length differs from state count");
  std::vector<S> mu(P.size(), S(0));
  mu[P.require_index(initial)] = S(1);
  std::vector<S> out;
  out.reserve(t_max + 1);
  out.push_back(tv_distance<S>(std::span<const S>(mu), pi));
  for (std::size_t t = 1; t <= t_max; ++t) {
    mu = P.left_multiply(mu);
    out.push_back(tv_distance<S>(std::span<const S>(mu), pi));
  }
  return out;
}

/// Brown's bound Σ_{X ≠ top} m_X λ_X^t.
template <Scalar S>
double brown_bound(const SpectrumReport<S>& r, std::size_t t) {
  const EdgeSet* top = nullptr;
  for (const auto& e : r.entries)
    if (!top || e.flat.count() > top->count()) top = &e.flat;
  double acc = 0.0;
  for (const auto& e : r.entries) {
    if (e.flat == *top || e.multiplicity == 0) continue;
    acc += static_cast<double>(e.multiplicity) * std::pow(to_double(e.eigenvalue), static_cast<double>(t));
  }
  return acc;
}

/// 2m(1 − 1/m)^t, valid for t ≥ 2m ln m.
inline double simple_tail_bound(std::size_t m, std::size_t t) {
  const double md = static_cast<double>(m);
  return 2.0 * md * std::pow(1.0 - 1.0 / md, static_cast<double>(t));
}

/// First t with t ≥ 2m ln m, where the tail bound starts to apply.
inline std::size_t simple_tail_start(std::size_t m) {
  const double md = static_cast<double>(m);
  return static_cast<std::size_t>(std::ceil(2.0 * md * std::log(md)));
}

namespace detail {

inline void check_c(double c) {
  if (!(c > 0.0)) fail(Errc::bad_distribution, "c must be positive");
}

inline std::uint64_t ceil_steps(double t) { return static_cast<std::uint64_t>(std::ceil(t - 1e-12)); }

}  // namespace detail

/// ceil(m (c + 2 ln m)).
inline std::uint64_t mixing_bound_simple(std::size_t m, double c) {
  detail::check_c(c);
  if (m == 0) fail(Errc::empty_edge_set, "host has no edges");
  const double md = static_cast<double>(m);
  return detail::ceil_steps(md * (c + 2.0 * std::log(md)));
}

/// ceil((m ln 2 + c)/(1 − λ∗)), or ceil((ln M + c)/(1 − λ∗)) when a chamber bound M is given.
inline std::uint64_t mixing_bound_compound(double lambda_star, std::size_t m, double c,
                                           std::optional<double> chamber_bound = std::nullopt) {
  detail::check_c(c);
  if (!(lambda_star < 1.0)) fail(Errc::degenerate_gap, "λ∗ = 1: no spectral gap");
  if (lambda_star < 0.0) fail(Errc::bad_distribution, "λ∗ must be non-negative");
  const double log_count = chamber_bound ? std::log(*chamber_bound) : static_cast<double>(m) * std::log(2.0);
  return detail::ceil_steps((log_count + c) / (1.0 - lambda_star));
}

/// Moran process on K_n: ceil((n² ln n + c n)/2).
inline std::uint64_t moran_complete_mixing_bound(std::size_t n, double c) {
  detail::check_c(c);
  const double nd = static_cast<double>(n);
  return detail::ceil_steps((nd * nd * std::log(nd) + c * nd) / 2.0);
}

/// Moran process on a host with m edges and minimum degree δ: ceil((m² ln 2 + c m)/δ).
inline std::uint64_t moran_general_mixing_bound(std::size_t m, std::size_t min_degree, double c) {
  detail::check_c(c);
  if (min_degree == 0) fail(Errc::degenerate_gap, "isolated vertex: minimum degree 0");
  const double md = static_cast<double>(m);
  return detail::ceil_steps((md * md * std::log(2.0) + c * md) / static_cast<double>(min_degree));
}

/// Intersection process: ceil(N n² ln 2 + c n).
inline std::uint64_t intersection_mixing_bound(std::size_t n, std::size_t attributes, double c) {
  detail::check_c(c);
  const double nd = static_cast<double>(n);
  return detail::ceil_steps(static_cast<double>(attributes) * nd * nd * std::log(2.0) + c * nd);
}

}  // namespace editwalk
