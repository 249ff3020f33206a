#pragma once

// Hitting and commute times: closed form for the simple process, first-step
// linear solves, and the generic eigen-expansion for reversible chains.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "editwalk/chain.hpp"
#include "editwalk/error.hpp"
#include "editwalk/linalg.hpp"
#include "editwalk/numeric.hpp"
#include "editwalk/scalar.hpp"
#include "editwalk/spectral.hpp"

namespace editwalk {

template <Scalar S>
struct CommuteTerm {
  Mask subset = 0;
  S value;
  /// E △ F ⊆ T: φ_T(E)/π(E) = φ_T(F)/π(F), so the term is identically zero.
  bool covers_difference = false;
  /// T ∩ (E △ F) = ∅.
  bool misses_difference = false;
};

/// Every term T ≠ 𝓔 of the closed-form commute-time sum, including the ones
/// that vanish. Term: m/(m−|T|) (ψ_T(E)/√π(E) − ψ_T(F)/√π(F))²,
/// evaluated as m/(m−|T|) ∏_{e∉T} p_e(1−p_e) (φ_T(E)/π(E) − φ_T(F)/π(F))², so
/// it stays exact in rational mode.
template <Scalar S>
std::vector<CommuteTerm<S>> commute_terms(Mask e_state, Mask f_state, std::span<const S> p) {
  const std::size_t m = p.size();
  detail::check_open_unit<S>(p, m);
  detail::check_enumerable(m);
  const Mask full = detail::full_mask(m);
  if ((e_state | f_state) & ~full) fail(Errc::edge_out_of_range, "state outside the host");
  // φ_T(E)/π(E) = (−1)^{|𝓔∖(E∪T)|} / (∏_{e∈E∖T} p_e ∏_{e∉E∪T} (1−p_e))
  auto ratio_at = [&](Mask t, Mask s) {
    S den(1);
    for (std::size_t e = 0; e < m; ++e) {
      const Mask bit = Mask{1} << e;
      if (t & bit) continue;
      den *= (s & bit) ? p[e] : S(1) - p[e];
    }
    S v = S(1) / den;
    if (std::popcount(full & ~(s | t)) % 2) v = -v;
    return v;
  };
  std::vector<CommuteTerm<S>> out;
  out.reserve(std::size_t{1} << m);
  const Mask diff = e_state ^ f_state;
  for (Mask t = 0; t < full; ++t) {
    S weight(1);
    for (std::size_t e = 0; e < m; ++e)
      if (!(t & (Mask{1} << e))) weight *= p[e] * (S(1) - p[e]);
    const S d = ratio_at(t, e_state) - ratio_at(t, f_state);
    const auto k = static_cast<std::int64_t>(std::popcount(t));
    const S factor = ratio<S>(static_cast<std::int64_t>(m), static_cast<std::int64_t>(m) - k);
    out.push_back({t, factor * weight * d * d, (diff & ~t) == 0, (t & diff) == 0});
  }
  return out;
}

/// C(E, F) for the simple process. φ_T(E)/π(E) only depends on E outside T,
/// so the terms with E △ F ⊆ T are zero and are skipped.
template <Scalar S>
S commute_time_closed_form(Mask e_state, Mask f_state, std::span<const S> p) {
  S acc(0);
  for (const auto& term : commute_terms<S>(e_state, f_state, p))
    if (!term.covers_difference) acc += term.value;
  return acc;
}

/// h(x) = E_x[τ_target] for every state, from (I − P) h = 1 off the target.
template <Scalar S>
std::vector<S> hitting_times_to(const TransitionMatrix<S>& P, std::size_t target) {
  const std::size_t n = P.size();
  if (target >= n) fail(Errc::edge_out_of_range, "target state index out of range");
  if (n > kDenseStateCap) fail(Errc::cap_exceeded, "linear solve limited to " + std::to_string(kDenseStateCap) + " states");
  std::vector<S> out(n, S(0));
  if (n == 1) return out;
  const std::size_t k = n - 1;
  auto reduced = [&](std::size_t i) { return i < target ? i : i - 1; };
  std::vector<S> a(k * k, S(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (i == target) continue;
    const auto r = reduced(i);
    a[r * k + r] += S(1);
    for (const auto& e : P.row(i)) {
      if (e.col == target) continue;
      a[r * k + reduced(e.col)] -= e.value;
    }
  }
  auto h = solve<S>(std::move(a), std::vector<S>(k, S(1)));
  if (!h) fail(Errc::not_irreducible, "target is not reachable from every state");
  for (std::size_t i = 0; i < n; ++i)
    if (i != target) out[i] = (*h)[reduced(i)];
  return out;
}

template <Scalar S>
S hitting_time_linear(const TransitionMatrix<S>& P, Mask from, Mask to) {
  return hitting_times_to(P, P.require_index(to))[P.require_index(from)];
}

template <Scalar S>
S commute_time_linear(const TransitionMatrix<S>& P, Mask a, Mask b) {
  return hitting_time_linear(P, a, b) + hitting_time_linear(P, b, a);
}

/// H(x, y) = Σ_{k≥2} φ_k(y)(φ_k(y) − φ_k(x))/(1 − λ_k) with φ_k = ψ_k/√π and
/// ψ_k orthonormal eigenvectors of Π^{1/2} P Π^{−1/2}. Each term is a product
/// of two entries of one eigenvector, so the sign of ψ_k cancels.
class SpectralHitting {
 public:
  explicit SpectralHitting(const TransitionMatrix<double>& P, double reversibility_tol = 1e-12) : P_(&P) {
    Eigen::MatrixXd a = to_eigen(P);
    std::vector<double> pi;
    try {
      pi = stationary_numeric<double>(P);
    } catch (const Error&) {
      fail(Errc::not_irreducible, "chain has no unique stationary law");
    }
    for (double x : pi)
      if (!(x > 0.0)) fail(Errc::not_irreducible, "stationary law is not positive");
    if (detailed_balance_defect(P, pi) > reversibility_tol) fail(Errc::not_reversible, "detailed balance fails");
    const auto n = a.rows();
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) s(i) = std::sqrt(pi[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd q = s.asDiagonal() * a * s.cwiseInverse().asDiagonal();
    q = 0.5 * (q + q.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
    // eigenvalues ascending: the last one is the Perron value 1
    const Eigen::Index k = n - 1;
    if (n > 1 && 1.0 - es.eigenvalues()(k - 1) < 1e-10) fail(Errc::not_irreducible, "eigenvalue 1 is repeated");
    lambda_.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
    f_ = es.eigenvectors().leftCols(k);
    for (Eigen::Index i = 0; i < n; ++i) f_.row(i) /= s(i);
  }

  double hitting_time(std::size_t x, std::size_t y) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < lambda_.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double fy = f_(static_cast<Eigen::Index>(y), jj);
      acc += fy * (fy - f_(static_cast<Eigen::Index>(x), jj)) / (1.0 - lambda_[j]);
    }
    return acc;
  }

  double commute_time(std::size_t x, std::size_t y) const { return hitting_time(x, y) + hitting_time(y, x); }

  double hitting_time_states(Mask from, Mask to) const {
    return hitting_time(P_->require_index(from), P_->require_index(to));
  }

 private:
  const TransitionMatrix<double>* P_;
  std::vector<double> lambda_;
  Eigen::MatrixXd f_;
};

enum class CommuteBackend { closed_form, linear, spectral };

}  // namespace editwalk
