#pragma once

// Dense numeric eigensolves used as an independent check of closed forms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "editwalk/chain.hpp"
#include "editwalk/error.hpp"
#include "editwalk/spectral.hpp"

namespace editwalk {

inline Eigen::MatrixXd to_eigen(const TransitionMatrix<double>& P) {
  const auto n = static_cast<Eigen::Index>(P.size());
  if (P.size() > kDenseStateCap) fail(Errc::cap_exceeded, "dense eigensolve limited to " + std::to_string(kDenseStateCap) + " states");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < P.size(); ++i)
    for (const auto& e : P.row(i)) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) = e.value;
  return out;
}

/// Largest |π(x)P(x,y) − π(y)P(y,x)| over all pairs.
inline double detailed_balance_defect(const TransitionMatrix<double>& P, std::span<const double> pi) {
  double worst = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (const auto& e : P.row(i)) worst = std::max(worst, std::fabs(pi[i] * e.value - pi[e.col] * P.at(e.col, i)));
  return worst;
}

struct NumericSpectrum {
  std::vector<double> values;  ///< real parts, largest first
  double max_imag = 0.0;
  bool symmetrized = false;  ///< solved as Π^{1/2} P Π^{−1/2} with a self-adjoint solver
};

/// Eigenvalues of a dense chain. Reversible chains with a positive stationary
/// law are symmetrized first; all others go through the general solver.
inline NumericSpectrum numeric_eigenvalues(const TransitionMatrix<double>& P) {
  Eigen::MatrixXd a = to_eigen(P);
  NumericSpectrum out;
  std::vector<double> pi;
  try {
    pi = stationary_numeric<double>(P);
  } catch (const Error&) {
    pi.clear();
  }
  const bool positive = !pi.empty() && std::all_of(pi.begin(), pi.end(), [](double x) { return x > 1e-300; });
  if (positive && detailed_balance_defect(P, pi) < 1e-12) {
    Eigen::VectorXd s(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) s(i) = std::sqrt(pi[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd q = s.asDiagonal() * a * s.cwiseInverse().asDiagonal();
    q = 0.5 * (q + q.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.values.push_back(es.eigenvalues()(i));
    out.symmetrized = true;
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      out.values.push_back(es.eigenvalues()(i).real());
      out.max_imag = std::max(out.max_imag, std::fabs(es.eigenvalues()(i).imag()));
    }
  }
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

struct MultisetMatch {
  bool ok = false;
  double max_gap = 0.0;
  std::string message;
};

/// Pairs sorted values greedily within `tol`; any unmatched value is a failure.
inline MultisetMatch match_multisets(std::vector<double> expected, std::vector<double> actual, double tol) {
  MultisetMatch r;
  if (expected.size() != actual.size()) {
    r.message = "size " + std::to_string(expected.size()) + " vs " + std::to_string(actual.size());
    return r;
  }
  std::sort(expected.begin(), expected.end(), std::greater<>());
  std::sort(actual.begin(), actual.end(), std::greater<>());
  std::vector<bool> used(actual.size(), false);
  std::size_t lo = 0;
  for (double x : expected) {
    while (lo < actual.size() && used[lo]) ++lo;
    std::size_t best = actual.size();
    for (std::size_t j = lo; j < actual.size(); ++j) {
      if (used[j]) continue;
      if (actual[j] < x - tol) break;
      if (std::fabs(actual[j] - x) <= tol) {
        best = j;
        break;
      }
    }
    if (best == actual.size()) {
      std::ostringstream os;
      os.precision(17);
      os << "no match for " << x;
      r.message = os.str();
      r.max_gap = std::max(r.max_gap, std::numeric_limits<double>::infinity());
      return r;
    }
    used[best] = true;
    r.max_gap = std::max(r.max_gap, std::fabs(actual[best] - x));
  }
  r.ok = true;
  return r;
}

template <Scalar S>
std::vector<double> spectrum_values(const SpectrumReport<S>& r) {
  std::vector<double> out;
  for (const auto& x : r.multiset()) out.push_back(to_double(x));
  return out;
}

}  // namespace editwalk
