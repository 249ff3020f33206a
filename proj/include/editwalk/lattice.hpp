#pragma once

// Support semilattice of a family of edits and the Möbius inversion that turns
// chamber counts into eigenvalue multiplicities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "editwalk/edge_set.hpp"
#include "editwalk/edit.hpp"
#include "editwalk/error.hpp"
#include "editwalk/scalar.hpp"

namespace editwalk {

inline constexpr std::size_t kDefaultFlatCap = std::size_t{1} << 20;
/// Lattices larger than this have no Möbius table; mobius() reports CapExceeded.
inline constexpr std::size_t kMobiusFlatCap = 4096;

/// Total weight of the generators sharing one support.
template <Scalar S>
struct SupportMass {
  EdgeSet support;
  S mass;
};

/// The union-closed family of flats generated by a list of supports, with ∅.
class SupportLattice {
 public:
  static SupportLattice closure(std::span<const EdgeSet> supports, std::size_t cap = kDefaultFlatCap) {
    if (supports.empty()) fail(Errc::empty_edge_set, "closure needs at least one support");
    const std::size_t m = supports.front().universe();
    SupportLattice L;
    L.generator_supports_.assign(supports.begin(), supports.end());

    // Every flat is a union of generator supports, so saturating under
    // "join with one generator" reaches the full union closure.
    std::vector<EdgeSet> distinct;
    {
      std::unordered_set<EdgeSet, EdgeSetHash> seen;
      for (const auto& s : supports) {
        if (s.universe() != m) fail(Errc::host_mismatch, "supports over different hosts");
        if (seen.insert(s).second) distinct.push_back(s);
      }
    }
    std::unordered_set<EdgeSet, EdgeSetHash> flats;
    std::vector<EdgeSet> frontier{EdgeSet(m)};
    flats.insert(EdgeSet(m));
    while (!frontier.empty()) {
      std::vector<EdgeSet> next;
      for (const auto& x : frontier) {
        for (const auto& s : distinct) {
          EdgeSet y = x | s;
          if (flats.insert(y).second) {
            if (flats.size() > cap) {
              fail(Errc::closure_too_large, "more than " + std::to_string(cap) + " flats");
            }
            next.push_back(std::move(y));
          }
        }
      }
      frontier = std::move(next);
    }
    L.flats_.assign(flats.begin(), flats.end());
    std::sort(L.flats_.begin(), L.flats_.end(), FlatOrder{});
    for (std::size_t i = 0; i < L.flats_.size(); ++i) L.index_.emplace(L.flats_[i], i);
    L.top_ = L.flats_.back();
    L.build_mobius();
    return L;
  }

  const std::vector<EdgeSet>& flats() const noexcept { return flats_; }
  const std::vector<EdgeSet>& generator_supports() const noexcept { return generator_supports_; }
  const EdgeSet& top() const noexcept { return top_; }
  std::size_t size() const noexcept { return flats_.size(); }
  std::size_t universe() const noexcept { return top_.universe(); }

  /// True when the generator supports cover every host edge.
  bool covers_host() const { return top_ == EdgeSet::full(top_.universe()); }

  std::optional<std::size_t> index_of(const EdgeSet& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool is_flat(const EdgeSet& x) const { return index_.contains(x); }

  std::size_t require_flat(const EdgeSet& x) const {
    auto i = index_of(x);
    if (!i) fail(Errc::not_a_flat, x.to_hex() + " is not a flat");
    return *i;
  }

  bool has_mobius_table() const noexcept { return !up_.empty(); }

  /// Indices of the flats containing flat i, in flat order (i itself first).
  const std::vector<std::size_t>& upset(std::size_t i) const {
    require_table();
    return up_.at(i);
  }

  std::int64_t mobius(const EdgeSet& x, const EdgeSet& y) const {
    auto i = require_flat(x);
    auto j = require_flat(y);
    if (!x.is_subset_of(y)) fail(Errc::not_comparable, x.to_hex() + " is not below " + y.to_hex());
    return mobius(i, j);
  }

  std::int64_t mobius(std::size_t i, std::size_t j) const {
    require_table();
    const auto& up = up_.at(i);
    auto it = std::lower_bound(up.begin(), up.end(), j);
    if (it == up.end() || *it != j) fail(Errc::not_comparable, "flats are not comparable");
    return mu_[i][static_cast<std::size_t>(it - up.begin())];
  }

 private:
  void require_table() const {
    if (!has_mobius_table()) {
      fail(Errc::cap_exceeded, "Möbius table is kept only for lattices with at most " +
                                   std::to_string(kMobiusFlatCap) + " flats (this one has " +
                                   std::to_string(flats_.size()) + ")");
    }
  }

  // μ(X,X) = 1 and μ(X,Y) = -Σ_{X ⊆ Z ⊊ Y} μ(X,Z), one sparse row per X.
  void build_mobius() {
    const std::size_t f = flats_.size();
    if (f > kMobiusFlatCap) return;
    const bool narrow = universe() <= kMaxEnumerableEdges;
    std::vector<Mask> masks;
    if (narrow) {
      masks.reserve(f);
      for (const auto& x : flats_) masks.push_back(x.mask());
    }
    auto subset = [&](std::size_t a, std::size_t b) {
      return narrow ? (masks[a] & ~masks[b]) == 0 : flats_[a].is_subset_of(flats_[b]);
    };
    up_.assign(f, {});
    mu_.assign(f, {});
    for (std::size_t i = 0; i < f; ++i) {
      for (std::size_t j = i; j < f; ++j) {
        if (subset(i, j)) up_[i].push_back(j);
      }
      // flat order is a linear extension of inclusion, so up_[i] starts with i
      // and every Z strictly between X and Y precedes Y.
      const auto& up = up_[i];
      auto& mu = mu_[i];
      mu.assign(up.size(), 0);
      mu[0] = 1;
      for (std::size_t k = 1; k < up.size(); ++k) {
        std::int64_t acc = 0;
        for (std::size_t l = 0; l < k; ++l) {
          if (subset(up[l], up[k])) acc += mu[l];
        }
        mu[k] = -acc;
      }
    }
  }

  std::vector<EdgeSet> flats_;
  std::vector<EdgeSet> generator_supports_;
  EdgeSet top_;
  std::unordered_map<EdgeSet, std::size_t, EdgeSetHash> index_;
  std::vector<std::vector<std::size_t>> up_;
  std::vector<std::vector<std::int64_t>> mu_;
};

/// λ_X: total weight of generators whose support lies inside X.
template <Scalar S>
S eigenvalue(const SupportLattice& lattice, const EdgeSet& x, std::span<const SupportMass<S>> masses) {
  lattice.require_flat(x);
  S total{0};
  for (const auto& sm : masses) {
    if (sm.support.is_subset_of(x)) total += sm.mass;
  }
  return total;
}

/// One representative edit per flat, drawn from the subsemigroup generated by
/// `generators`: rep(∅) = identity, rep(X ∪ supp g) = rep(X)·g.
inline std::vector<Edit> representatives(const SupportLattice& lattice, std::span<const Edit> generators) {
  const auto f = lattice.size();
  std::vector<std::optional<Edit>> reps(f);
  const std::size_t m = lattice.universe();
  reps[lattice.require_flat(EdgeSet(m))] = Edit(m);
  std::vector<std::size_t> queue{lattice.require_flat(EdgeSet(m))};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto i = queue[head];
    for (const auto& g : generators) {
      auto j = lattice.require_flat(lattice.flats()[i] | g.support());
      if (!reps[j]) {
        reps[j] = compose(*reps[i], g);
        queue.push_back(j);
      }
    }
  }
  std::vector<Edit> out;
  out.reserve(f);
  for (std::size_t i = 0; i < f; ++i) {
    if (!reps[i]) fail(Errc::bad_representative, "flat " + lattice.flats()[i].to_hex() + " unreachable");
    out.push_back(std::move(*reps[i]));
  }
  return out;
}

struct FlatMultiplicity {
  std::int64_t chamber_count = 0;  ///< c_X = |{chambers y : y >= rep(X)}|
  std::int64_t multiplicity = 0;   ///< m_X = Σ_{Y ⊇ X} μ(X,Y) c_Y
};

/// c_X for every flat: chambers agreeing in sign with the representative on X.
inline std::vector<std::int64_t> chamber_counts(const SupportLattice& lattice, std::span<const Edit> chambers,
                                                std::span<const Edit> reps) {
  if (reps.size() != lattice.size()) fail(Errc::length_mismatch, "one representative per flat required");
  std::vector<std::int64_t> counts(lattice.size(), 0);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (reps[i].support() != lattice.flats()[i]) {
      fail(Errc::bad_representative, "representative support differs from flat " + lattice.flats()[i].to_hex());
    }
    for (const auto& c : chambers) {
      if (leq(reps[i], c)) ++counts[i];
    }
  }
  return counts;
}

/// Möbius inversion of the chamber counts over the flat order.
inline std::vector<FlatMultiplicity> multiplicities(const SupportLattice& lattice, std::span<const Edit> chambers,
                                                    std::span<const Edit> reps) {
  auto counts = chamber_counts(lattice, chambers, reps);
  std::vector<FlatMultiplicity> out(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    std::int64_t acc = 0;
    const auto& up = lattice.upset(i);
    for (std::size_t j : up) acc += lattice.mobius(i, j) * counts[j];
    out[i] = FlatMultiplicity{counts[i], acc};
  }
  return out;
}

namespace detail {

/// Eigenvalues summed in different orders may differ in the last bits.
inline bool same_value(double a, double b) { return std::fabs(a - b) <= 1e-12; }
inline bool same_value(const Rational& a, const Rational& b) { return a == b; }

}  // namespace detail

template <Scalar S>
struct SpectrumEntry {
  EdgeSet flat;
  S eigenvalue;
  std::int64_t multiplicity = 0;
};

template <Scalar S>
struct SpectrumReport {
  std::vector<SpectrumEntry<S>> entries;
  /// Edges no generator touches; analysis is relative to the rest.
  EdgeSet frozen_edges;
  std::int64_t chamber_count = 0;

  std::int64_t dimension() const {
    std::int64_t d = 0;
    for (const auto& e : entries) d += e.multiplicity;
    return d;
  }

  /// Distinct eigenvalues with summed multiplicities, largest first; zero
  /// multiplicities dropped.
  std::vector<std::pair<S, std::int64_t>> aggregated() const {
    std::vector<std::pair<S, std::int64_t>> out;
    for (const auto& e : entries) {
      if (e.multiplicity == 0) continue;
      auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return detail::same_value(p.first, e.eigenvalue); });
      if (it == out.end()) out.emplace_back(e.eigenvalue, e.multiplicity);
      else it->second += e.multiplicity;
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    return out;
  }

  /// Eigenvalue multiset, largest first.
  std::vector<S> multiset() const {
    std::vector<S> out;
    for (const auto& e : entries)
      for (std::int64_t k = 0; k < e.multiplicity; ++k) out.push_back(e.eigenvalue);
    std::sort(out.begin(), out.end(), [](const S& a, const S& b) { return a > b; });
    return out;
  }
};

}  // namespace editwalk
