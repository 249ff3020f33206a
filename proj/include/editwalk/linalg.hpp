#pragma once

// Small dense linear algebra over double or exact rationals (row-major storage).

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "editwalk/error.hpp"
#include "editwalk/scalar.hpp"

namespace editwalk {

namespace detail {

template <Scalar S>
bool negligible(const S& x, double scale) {
  if constexpr (is_exact_v<S>) {
    (void)scale;
    return x == 0;
  } else {
    return std::fabs(x) <= 1e-13 * scale;
  }
}

template <Scalar S>
double max_abs(std::span<const S> a) {
  double s = 0.0;
  for (const auto& x : a) s = std::max(s, std::fabs(to_double(x)));
  return s > 0.0 ? s : 1.0;
}

}  // namespace detail

/// Solves A x = b (A is n x n). Returns nullopt when A is singular.
template <Scalar S>
std::optional<std::vector<S>> solve(std::vector<S> a, std::vector<S> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) fail(Errc::length_mismatch, "solve: matrix must be n x n");
  const double scale = detail::max_abs<S>(a);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    if constexpr (is_exact_v<S>) {
      while (piv < n && a[piv * n + col] == 0) ++piv;
      if (piv == n) return std::nullopt;
    } else {
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
      if (detail::negligible(a[piv * n + col], scale)) return std::nullopt;
    }
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(b[col], b[piv]);
    }
    const S pivot = a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r * n + col] == S(0)) continue;
      const S f = a[r * n + col] / pivot;
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  std::vector<S> x(n, S(0));
  for (std::size_t i = n; i-- > 0;) {
    S acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= a[i * n + k] * x[k];
    x[i] = acc / a[i * n + i];
  }
  return x;
}

/// Rank of a rows x cols matrix (exact for rationals, relative tolerance for doubles).
template <Scalar S>
std::size_t rank(std::vector<S> a, std::size_t rows, std::size_t cols, double tol = 1e-9) {
  if (a.size() != rows * cols) fail(Errc::length_mismatch, "rank: shape mismatch");
  const double scale = detail::max_abs<S>(a);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    for (std::size_t i = r; i < rows; ++i)
      if (abs_value(a[i * cols + c]) > abs_value(a[piv * cols + c])) piv = i;
    bool zero;
    if constexpr (is_exact_v<S>) zero = a[piv * cols + c] == 0;
    else zero = std::fabs(a[piv * cols + c]) <= tol * scale;
    if (zero) continue;
    for (std::size_t k = 0; k < cols; ++k) std::swap(a[r * cols + k], a[piv * cols + k]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i * cols + c] == S(0)) continue;
      const S f = a[i * cols + c] / a[r * cols + c];
      for (std::size_t k = c; k < cols; ++k) a[i * cols + k] -= f * a[r * cols + k];
    }
    ++r;
  }
  return r;
}

template <Scalar S>
std::vector<S> matmul(std::span<const S> a, std::span<const S> b, std::size_t n) {
  std::vector<S> out(n * n, S(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i * n + k] == S(0)) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += a[i * n + k] * b[k * n + j];
    }
  return out;
}

}  // namespace editwalk
