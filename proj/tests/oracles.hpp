#pragma once

// Independent reference computations used by the tests. These deliberately
// avoid the library's chain builder and closed forms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "editwalk/editwalk.hpp"

namespace oracle {

using editwalk::EdgeSet;
using editwalk::Mask;

/// Dense 2^m x 2^m matrix, row = from-state mask, built by applying each edit.
template <class S>
std::vector<S> brute_chain(const editwalk::WeightedEdits<S>& dist) {
  const std::size_t m = dist.universe();
  const std::size_t n = std::size_t{1} << m;
  std::vector<S> P(n * n, S(0));
  for (Mask s = 0; s < n; ++s) {
    const EdgeSet state = EdgeSet::from_mask(m, s);
    for (const auto& it : dist.items()) P[s * n + editwalk::apply(it.edit, state).mask()] += it.weight;
  }
  return P;
}

/// π(E) = ∏_{e∈E} p_e ∏_{e∉E} (1 − p_e), computed edge by edge.
template <class S>
S product_pi(Mask state, const std::vector<S>& p) {
  S v(1);
  for (std::size_t e = 0; e < p.size(); ++e) v *= ((state >> e) & 1) ? p[e] : S(1) - p[e];
  return v;
}

inline Eigen::MatrixXd to_matrix(const std::vector<double>& dense, std::size_t n) {
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = dense[i * n + j];
  return a;
}

/// Real parts of the eigenvalues of a general matrix, descending.
inline std::vector<double> eigenvalues(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < a.rows(); ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Largest gap after pairing sorted lists elementwise.
inline double sorted_gap(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return INFINITY;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double g = 0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::fabs(a[i] - b[i]));
  return g;
}

/// Acyclicity by edge/vertex counting per component (DFS), not union-find.
inline bool acyclic(const editwalk::HostGraph& g, const EdgeSet& s) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::size_t>> adj(n);
  std::size_t edges = 0;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (!s.contains(i)) continue;
    adj[g.edges()[i].u].push_back(g.edges()[i].v);
    adj[g.edges()[i].v].push_back(g.edges()[i].u);
    ++edges;
  }
  std::vector<char> seen(n, 0);
  std::size_t components = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (seen[v]) continue;
    ++components;
    std::vector<std::size_t> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (auto y : adj[x])
        if (!seen[y]) seen[y] = 1, stack.push_back(y);
    }
  }
  return edges + components == n;
}

/// Random reduced edit with each edge independently +, − or untouched.
inline editwalk::Edit random_edit(std::size_t m, editwalk::Rng& rng) {
  EdgeSet plus(m), minus(m);
  for (std::size_t e = 0; e < m; ++e) {
    switch (rng.below(3)) {
      case 0: plus.insert(e); break;
      case 1: minus.insert(e); break;
      default: break;
    }
  }
  return editwalk::Edit(plus, minus);
}

}  // namespace oracle
