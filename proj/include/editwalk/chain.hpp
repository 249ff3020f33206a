#pragma once

// Exact transition matrices of edit processes over bitmask state spaces.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "editwalk/edge_set.hpp"
#include "editwalk/edit.hpp"
#include "editwalk/error.hpp"
#include "editwalk/host_graph.hpp"
#include "editwalk/scalar.hpp"
#include "editwalk/weights.hpp"

namespace editwalk {

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 20;
/// Dense views (eigensolves, linear solves) are limited to this many states.
inline constexpr std::size_t kDenseStateCap = 4096;

namespace detail {

struct MaskEdit {
  Mask plus = 0;
  Mask minus = 0;
  Mask apply(Mask s) const noexcept { return (s | plus) & ~minus; }
  Mask support() const noexcept { return plus | minus; }
};

inline MaskEdit to_mask_edit(const Edit& x) { return MaskEdit{x.plus().mask(), x.minus().mask()}; }

template <Scalar S>
std::vector<std::pair<MaskEdit, S>> mask_items(const WeightedEdits<S>& dist) {
  if (dist.universe() > kMaxEnumerableEdges) {
    fail(Errc::cap_exceeded, "exact engine needs m <= 63, got m = " + std::to_string(dist.universe()));
  }
  if (dist.is_lazy()) fail(Errc::cap_exceeded, "lazy distributions cannot be enumerated; use explicit mode");
  std::vector<std::pair<MaskEdit, S>> out;
  out.reserve(dist.items().size());
  for (const auto& it : dist.items()) out.emplace_back(to_mask_edit(it.edit), it.weight);
  return out;
}

inline Mask full_mask(std::size_t m) { return m == 64 ? ~Mask{0} : (Mask{1} << m) - 1; }

}  // namespace detail

/// Row-stochastic matrix over an ordered list of states (ascending bitmask).
///
/// Rows are stored sparsely: a state has at most one successor per generator.
/// `dense()` materializes the full matrix for states up to kDenseStateCap.
template <Scalar S>
class TransitionMatrix {
 public:
  struct Entry {
    std::size_t col;
    S value;
  };

  TransitionMatrix() = default;

  TransitionMatrix(std::size_t universe, std::vector<Mask> states, std::vector<std::size_t> row_ptr,
                   std::vector<Entry> entries)
      : universe_(universe), states_(std::move(states)), row_ptr_(std::move(row_ptr)), entries_(std::move(entries)) {
    if (row_ptr_.size() != states_.size() + 1) fail(Errc::length_mismatch, "row pointer size");
    if (!std::is_sorted(states_.begin(), states_.end())) fail(Errc::length_mismatch, "states must be ascending");
    identity_index_ = true;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i] != i) {
        identity_index_ = false;
        break;
      }
    }
  }

  /// Builds from a row-major dense matrix; zero entries are dropped.
  static TransitionMatrix from_dense(std::size_t universe, std::vector<Mask> states, std::span<const S> dense) {
    const auto n = states.size();
    if (dense.size() != n * n) fail(Errc::length_mismatch, "dense matrix must be n x n");
    std::vector<std::size_t> row_ptr{0};
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (dense[i * n + j] != S(0)) entries.push_back({j, dense[i * n + j]});
      }
      row_ptr.push_back(entries.size());
    }
    return TransitionMatrix(universe, std::move(states), std::move(row_ptr), std::move(entries));
  }

  std::size_t size() const noexcept { return states_.size(); }
  std::size_t universe() const noexcept { return universe_; }
  const std::vector<Mask>& states() const noexcept { return states_; }
  Mask state_mask(std::size_t i) const { return states_.at(i); }
  EdgeSet state(std::size_t i) const { return EdgeSet::from_mask(universe_, states_.at(i)); }

  std::optional<std::size_t> index_of(Mask s) const {
    if (identity_index_) return s < states_.size() ? std::optional<std::size_t>(s) : std::nullopt;
    auto it = std::lower_bound(states_.begin(), states_.end(), s);
    if (it == states_.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
  }

  std::size_t require_index(Mask s) const {
    auto i = index_of(s);
    if (!i) fail(Errc::not_a_chamber, "state " + EdgeSet::from_mask(universe_, s).to_hex() + " is not in the chain");
    return *i;
  }

  std::span<const Entry> row(std::size_t i) const {
    return std::span<const Entry>(entries_).subspan(row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]);
  }

  S at(std::size_t i, std::size_t j) const {
    for (const auto& e : row(i))
      if (e.col == j) return e.value;
    return S(0);
  }

  std::vector<S> dense() const {
    const auto n = size();
    if (n > kDenseStateCap) {
      fail(Errc::cap_exceeded, "dense view limited to " + std::to_string(kDenseStateCap) + " states, chain has " +
                                   std::to_string(n));
    }
    std::vector<S> out(n * n, S(0));
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& e : row(i)) out[i * n + e.col] = e.value;
    return out;
  }

  /// v P for a row vector v over the states.
  std::vector<S> left_multiply(std::span<const S> v) const {
    if (v.size() != size()) fail(Errc::length_mismatch, "vector length differs from state count");
    std::vector<S> out(size(), S(0));
    for (std::size_t i = 0; i < size(); ++i) {
      if (v[i] == S(0)) continue;
      for (const auto& e : row(i)) out[e.col] += v[i] * e.value;
    }
    return out;
  }

  std::vector<S> row_sums() const {
    std::vector<S> out(size(), S(0));
    for (std::size_t i = 0; i < size(); ++i)
      for (const auto& e : row(i)) out[i] += e.value;
    return out;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<Mask> states_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Entry> entries_;
  bool identity_index_ = false;
};

enum class Restrict { all, recurrent };
enum class CoveragePolicy { freeze, strict };

/// The closed communicating class of a compound edit process: its chambers.
struct RecurrentClass {
  std::size_t universe = 0;
  std::vector<Mask> states;  ///< ascending
  EdgeSet frozen_edges;      ///< edges no generator touches; held at their initial value

  bool covers_host() const { return frozen_edges.empty(); }
};

/// Reaches one chamber by applying a product of generators covering every
/// touched edge, then closes under all generator applications.
template <Scalar S>
RecurrentClass recurrent_class(const WeightedEdits<S>& dist, const HostGraph& g, const EdgeSet& initial,
                               CoveragePolicy policy = CoveragePolicy::freeze, std::size_t cap = kDefaultStateCap) {
  const std::size_t m = g.edge_count();
  if (dist.universe() != m || initial.universe() != m) fail(Errc::host_mismatch, "distribution over a different host");
  auto items = detail::mask_items(dist);
  Mask top = 0;
  for (const auto& [x, w] : items) top |= x.support();
  RecurrentClass rc;
  rc.universe = m;
  rc.frozen_edges = EdgeSet::from_mask(m, detail::full_mask(m) & ~top);
  if (!rc.frozen_edges.empty() && policy == CoveragePolicy::strict) {
    fail(Errc::support_not_covering, "edges " + rc.frozen_edges.to_hex() + " are touched by no edit");
  }
  Mask start = initial.mask();
  Mask covered = 0;
  for (const auto& [x, w] : items) {
    if (x.support() & ~covered) {
      start = x.apply(start);
      covered |= x.support();
    }
  }
  std::unordered_set<Mask> seen{start};
  std::vector<Mask> order{start};
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Mask s = order[head];
    for (const auto& [x, w] : items) {
      Mask t = x.apply(s);
      if (seen.insert(t).second) {
        if (seen.size() > cap) fail(Errc::cap_exceeded, "recurrent class exceeds " + std::to_string(cap) + " states");
        order.push_back(t);
      }
    }
  }
  std::sort(order.begin(), order.end());
  rc.states = std::move(order);
  return rc;
}

/// Chambers of the recurrent class as edits: signs on every touched edge.
inline std::vector<Edit> chamber_edits(const RecurrentClass& rc) {
  const Mask top = detail::full_mask(rc.universe) & ~rc.frozen_edges.mask();
  std::vector<Edit> out;
  out.reserve(rc.states.size());
  for (Mask s : rc.states) {
    out.emplace_back(EdgeSet::from_mask(rc.universe, s & top), EdgeSet::from_mask(rc.universe, top & ~s));
  }
  return out;
}

/// P(E, F) = Σ of weights of edits sending E to F, over all 2^m states or
/// over the recurrent class reached from `initial`.
template <Scalar S>
TransitionMatrix<S> build_chain(const WeightedEdits<S>& dist, const HostGraph& g, Restrict restrict = Restrict::all,
                                std::size_t cap = kDefaultStateCap, const EdgeSet* initial = nullptr) {
  const std::size_t m = g.edge_count();
  if (dist.universe() != m) fail(Errc::host_mismatch, "distribution over a different host");
  auto items = detail::mask_items(dist);
  std::vector<Mask> states;
  if (restrict == Restrict::all) {
    if (m > 20 || (std::size_t{1} << m) > cap) {
      fail(Errc::cap_exceeded, "2^" + std::to_string(m) + " states exceed the cap of " + std::to_string(cap) +
                                   " (raise --cap-states or use the recurrent class)");
    }
    states.resize(std::size_t{1} << m);
    for (std::size_t i = 0; i < states.size(); ++i) states[i] = i;
  } else {
    EdgeSet empty(m);
    states = recurrent_class(dist, g, initial ? *initial : empty, CoveragePolicy::freeze, cap).states;
  }

  using Entry = typename TransitionMatrix<S>::Entry;
  const std::size_t n = states.size();
  const bool identity = restrict == Restrict::all;
  auto column = [&](Mask t) -> std::size_t {
    if (identity) return static_cast<std::size_t>(t);
    auto it = std::lower_bound(states.begin(), states.end(), t);
    if (it == states.end() || *it != t) fail(Errc::not_irreducible, "state class is not closed");
    return static_cast<std::size_t>(it - states.begin());
  };

  // Rows are independent; large chains are split across threads, each
  // writing its own block.
  auto build_rows = [&](std::size_t lo, std::size_t hi, std::vector<std::size_t>& counts, std::vector<Entry>& out) {
    std::vector<Entry> scratch;
    for (std::size_t i = lo; i < hi; ++i) {
      scratch.clear();
      for (const auto& [x, w] : items) scratch.push_back({column(x.apply(states[i])), w});
      std::sort(scratch.begin(), scratch.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
      std::size_t before = out.size();
      for (auto& e : scratch) {
        if (out.size() > before && out.back().col == e.col) out.back().value += e.value;
        else out.push_back(std::move(e));
      }
      counts.push_back(out.size() - before);
    }
  };

  const std::size_t workers =
      n >= (std::size_t{1} << 14) ? std::max<std::size_t>(1, std::min<std::size_t>(8, std::thread::hardware_concurrency())) : 1;
  std::vector<std::vector<std::size_t>> counts(workers);
  std::vector<std::vector<Entry>> blocks(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = std::min(n, w * chunk), hi = std::min(n, lo + chunk);
      if (workers == 1) build_rows(lo, hi, counts[w], blocks[w]);
      else pool.emplace_back([&, w, lo, hi] { build_rows(lo, hi, counts[w], blocks[w]); });
    }
  }
  std::vector<std::size_t> row_ptr{0};
  row_ptr.reserve(n + 1);
  std::vector<Entry> entries;
  for (std::size_t w = 0; w < workers; ++w) {
    for (auto c : counts[w]) row_ptr.push_back(row_ptr.back() + c);
    for (auto& e : blocks[w]) entries.push_back(std::move(e));
  }
  return TransitionMatrix<S>(m, std::move(states), std::move(row_ptr), std::move(entries));
}

/// States in "chamber notation" order: edge 0 read as the most significant
/// sign, all-plus first. For m = 2 with edges a, b: (ab, a, b, ∅).
inline std::vector<Mask> chamber_notation_order(std::size_t m) {
  if (m > 20) fail(Errc::cap_exceeded, "ordering helper needs m <= 20");
  std::vector<Mask> out;
  const Mask count = Mask{1} << m;
  out.reserve(count);
  for (Mask k = count; k-- > 0;) {
    Mask s = 0;
    for (std::size_t b = 0; b < m; ++b)
      if ((k >> (m - 1 - b)) & 1U) s |= Mask{1} << b;
    out.push_back(s);
  }
  return out;
}

/// Dense matrix with rows/columns listed in `order` (a permutation of the states).
template <Scalar S>
std::vector<S> dense_in_order(const TransitionMatrix<S>& P, std::span<const Mask> order) {
  if (order.size() != P.size()) fail(Errc::length_mismatch, "order must list every state");
  const auto n = P.size();
  std::vector<S> out(n * n, S(0));
  for (std::size_t r = 0; r < n; ++r) {
    auto i = P.require_index(order[r]);
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] = P.at(i, P.require_index(order[c]));
  }
  return out;
}

/// Re-lists a vector indexed by P's states in the given order.
template <Scalar S>
std::vector<S> reorder(const TransitionMatrix<S>& P, std::span<const S> v, std::span<const Mask> order) {
  std::vector<S> out;
  out.reserve(order.size());
  for (Mask s : order) out.push_back(v[P.require_index(s)]);
  return out;
}

}  // namespace editwalk
