#pragma once

// Driving distributions over edits: the simple edit process, the Moran edit
// process, the dynamic random intersection graph, and custom families.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "editwalk/edge_set.hpp"
#include "editwalk/edit.hpp"
#include "editwalk/error.hpp"
#include "editwalk/host_graph.hpp"
#include "editwalk/lattice.hpp"
#include "editwalk/random.hpp"
#include "editwalk/scalar.hpp"

namespace editwalk {

inline constexpr std::size_t kDefaultExplicitCap = std::size_t{1} << 20;

template <Scalar S>
struct WeightedEdit {
  Edit edit;
  S weight;
};

/// Closed-form description of a distribution too large to list.
struct LazyEdits {
  std::vector<SupportMass<double>> support_masses;
  std::function<Edit(Rng&)> draw;
  std::function<double(const Edit&)> weight_of;
};

/// A finite probability distribution w over edits.
template <Scalar S = double>
class WeightedEdits {
 public:
  using Item = WeightedEdit<S>;

  static WeightedEdits from_items(std::size_t universe, std::vector<Item> items) {
    if (items.empty()) fail(Errc::bad_distribution, "no edits");
    S total{0};
    for (const auto& it : items) {
      if (it.edit.universe() != universe) fail(Errc::host_mismatch, "edit over a different host");
      if (!(it.weight > S(0))) fail(Errc::bad_distribution, "weights must be strictly positive");
      total += it.weight;
    }
    if constexpr (is_exact_v<S>) {
      if (total != S(1)) fail(Errc::bad_distribution, "weights sum to " + format_scalar(total));
    } else {
      if (std::fabs(total - 1.0) > 1e-12) fail(Errc::bad_distribution, "weights sum to " + format_scalar(total));
    }
    WeightedEdits w;
    w.universe_ = universe;
    w.items_ = std::move(items);
    return w;
  }

  static WeightedEdits from_lazy(std::size_t universe, LazyEdits lazy)
    requires std::same_as<S, double>
  {
    double total = 0.0;
    for (const auto& sm : lazy.support_masses) total += sm.mass;
    if (std::fabs(total - 1.0) > 1e-12) fail(Errc::bad_distribution, "lazy masses sum to " + format_scalar(total));
    WeightedEdits w;
    w.universe_ = universe;
    w.lazy_ = std::move(lazy);
    return w;
  }

  std::size_t universe() const noexcept { return universe_; }
  bool is_lazy() const noexcept { return lazy_.has_value(); }

  const std::vector<Item>& items() const {
    if (lazy_) fail(Errc::cap_exceeded, "lazy distribution has no explicit edit list");
    return items_;
  }

  std::vector<Edit> generators() const {
    std::vector<Edit> out;
    for (const auto& it : items()) out.push_back(it.edit);
    return out;
  }

  /// Generator weight aggregated by support; enough for every eigenvalue λ_X.
  std::vector<SupportMass<S>> support_masses() const {
    if constexpr (std::same_as<S, double>) {
      if (lazy_) return lazy_->support_masses;
    }
    std::vector<SupportMass<S>> out;
    std::unordered_map<EdgeSet, std::size_t, EdgeSetHash> where;
    for (const auto& it : items_) {
      auto s = it.edit.support();
      auto [pos, inserted] = where.emplace(s, out.size());
      if (inserted) out.push_back(SupportMass<S>{std::move(s), it.weight});
      else out[pos->second].mass += it.weight;
    }
    return out;
  }

  std::vector<EdgeSet> generator_supports() const {
    std::vector<EdgeSet> out;
    for (auto& sm : support_masses()) out.push_back(std::move(sm.support));
    return out;
  }

  /// Total weight carried by edit x (0 when x is not a generator).
  S weight_of(const Edit& x) const {
    if constexpr (std::same_as<S, double>) {
      if (lazy_) return lazy_->weight_of(x);
    }
    S total{0};
    for (const auto& it : items_)
      if (it.edit == x) total += it.weight;
    return total;
  }

  const LazyEdits& lazy() const {
    if (!lazy_) fail(Errc::bad_distribution, "distribution is explicit");
    return *lazy_;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<Item> items_;
  std::optional<LazyEdits> lazy_;
};

namespace detail {

template <Scalar S>
void check_open_unit(std::span<const S> p, std::size_t m) {
  if (p.size() != m) {
    fail(Errc::length_mismatch, "expected " + std::to_string(m) + " edge probabilities, got " +
                                    std::to_string(p.size()));
  }
  for (std::size_t e = 0; e < m; ++e) {
    if (!(p[e] > S(0) && p[e] < S(1))) {
      fail(Errc::probability_out_of_range, "p_" + std::to_string(e) + " = " + format_scalar(p[e]) +
                                               " is outside (0, 1)");
    }
  }
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// Simple edit process: w(e+) = p_e/m and w(e-) = (1 - p_e)/m.
template <Scalar S>
WeightedEdits<S> simple_edit_weights(const HostGraph& g, std::span<const S> p) {
  const std::size_t m = g.edge_count();
  if (m == 0) fail(Errc::empty_edge_set, "host has no edges");
  detail::check_open_unit<S>(p, m);
  std::vector<WeightedEdit<S>> items;
  items.reserve(2 * m);
  const S inv_m = S(1) / S(static_cast<std::int64_t>(m));
  for (std::size_t e = 0; e < m; ++e) {
    items.push_back({simple_edit(m, e, Sign::plus), p[e] * inv_m});
    items.push_back({simple_edit(m, e, Sign::minus), (S(1) - p[e]) * inv_m});
  }
  return WeightedEdits<S>::from_items(m, std::move(items));
}

template <Scalar S>
WeightedEdits<S> simple_edit_weights(const HostGraph& g, const std::vector<S>& p) {
  return simple_edit_weights<S>(g, std::span<const S>(p));
}

/// The Moran edit for oriented edge (u, v): delete every edge at u, then add {u, v}.
inline Edit moran_edit(const HostGraph& g, Vertex u, Vertex v) {
  const auto e = g.edge_index(u, v);
  EdgeSet plus(g.edge_count());
  plus.insert(e);
  return Edit(plus, g.neighborhood_edges(u) - plus);
}

/// Moran edit process: one edit per oriented edge, each with weight 1/(2m).
template <Scalar S = double>
WeightedEdits<S> moran_weights(const HostGraph& g) {
  const std::size_t m = g.edge_count();
  if (m == 0) fail(Errc::empty_edge_set, "Moran process needs at least one edge");
  const S w = ratio<S>(1, static_cast<std::int64_t>(2 * m));
  std::vector<WeightedEdit<S>> items;
  items.reserve(2 * m);
  for (const auto& e : g.edges()) {
    items.push_back({moran_edit(g, e.u, e.v), w});
    items.push_back({moran_edit(g, e.v, e.u), w});
  }
  return WeightedEdits<S>::from_items(m, std::move(items));
}

enum class EnumerationMode { explicit_list, lazy };

/// Host of the dynamic random intersection graph: K_{n,N}, symbols 0..n-1 and
/// attributes n..n+N-1.
inline HostGraph intersection_host(std::size_t n, std::size_t attributes) {
  return complete_bipartite(n, attributes);
}

/// y_{v,A}: v's attribute edges become exactly A (bit u of `subset` is attribute u).
inline Edit intersection_edit(const HostGraph& host, std::size_t n, std::size_t attributes, Vertex v,
                              std::span<const char> subset) {
  EdgeSet plus(host.edge_count()), minus(host.edge_count());
  for (std::size_t u = 0; u < attributes; ++u) {
    auto e = host.edge_index(v, n + u);
    (subset[u] ? plus : minus).insert(e);
  }
  return Edit(std::move(plus), std::move(minus));
}

/// Dynamic random intersection graph: w(y_{v,A}) = (1/n) μ(|A|) / C(N, |A|).
///
/// Edits of weight zero (μ(|A|) = 0) are omitted. Lazy mode draws v uniformly,
/// |A| from μ, then A uniformly among subsets of that size.
template <Scalar S = double>
WeightedEdits<S> intersection_weights(std::size_t n, std::size_t attributes, std::span<const S> mu,
                                      EnumerationMode mode = EnumerationMode::explicit_list,
                                      std::size_t cap = kDefaultExplicitCap) {
  if (n == 0 || attributes == 0) fail(Errc::empty_edge_set, "need n >= 1 and N >= 1");
  if (mu.size() != attributes + 1) fail(Errc::bad_distribution, "μ must have N + 1 entries");
  S total{0};
  for (const auto& x : mu) {
    if (x < S(0)) fail(Errc::bad_distribution, "μ has a negative entry");
    total += x;
  }
  if constexpr (is_exact_v<S>) {
    if (total != S(1)) fail(Errc::bad_distribution, "μ sums to " + format_scalar(total));
  } else {
    if (std::fabs(total - 1.0) > 1e-12) fail(Errc::bad_distribution, "μ sums to " + format_scalar(total));
  }
  const HostGraph host = intersection_host(n, attributes);
  const std::size_t m = host.edge_count();

  if (mode == EnumerationMode::lazy) {
    if constexpr (!std::same_as<S, double>) {
      fail(Errc::bad_distribution, "lazy mode is double precision only");
    } else {
      LazyEdits lazy;
      for (Vertex v = 0; v < n; ++v) lazy.support_masses.push_back({host.neighborhood_edges(v), 1.0 / double(n)});
      std::vector<double> mu_copy(mu.begin(), mu.end());
      auto size_table = std::make_shared<AliasTable>(mu_copy);
      lazy.draw = [host, n, attributes, size_table](Rng& rng) {
        auto v = static_cast<Vertex>(rng.below(n));
        auto k = size_table->sample(rng);
        std::vector<std::size_t> pool(attributes);
        for (std::size_t i = 0; i < attributes; ++i) pool[i] = i;
        std::vector<char> chosen(attributes, 0);
        for (std::size_t i = 0; i < k; ++i) {
          auto j = i + static_cast<std::size_t>(rng.below(attributes - i));
          std::swap(pool[i], pool[j]);
          chosen[pool[i]] = 1;
        }
        return intersection_edit(host, n, attributes, v, chosen);
      };
      lazy.weight_of = [host, n, attributes, mu_copy](const Edit& x) {
        if (x.universe() != host.edge_count()) return 0.0;
        for (Vertex v = 0; v < n; ++v) {
          if (x.support() == host.neighborhood_edges(v)) {
            auto k = x.plus().count();
            return mu_copy[k] / (double(n) * double(detail::binomial(attributes, k)));
          }
        }
        return 0.0;
      };
      return WeightedEdits<S>::from_lazy(m, std::move(lazy));
    }
  }

  if (attributes >= 63 || n * (std::size_t{1} << attributes) > cap) {
    fail(Errc::cap_exceeded, "explicit intersection family has n * 2^N edits; limit is " + std::to_string(cap));
  }
  std::vector<WeightedEdit<S>> items;
  std::vector<char> bits(attributes);
  for (Vertex v = 0; v < n; ++v) {
    for (Mask a = 0; a < (Mask{1} << attributes); ++a) {
      std::size_t k = 0;
      for (std::size_t u = 0; u < attributes; ++u) {
        bits[u] = static_cast<char>((a >> u) & 1U);
        k += static_cast<std::size_t>(bits[u]);
      }
      if (mu[k] == S(0)) continue;
      S w = mu[k] / (S(static_cast<std::int64_t>(n)) * S(static_cast<std::int64_t>(detail::binomial(attributes, k))));
      items.push_back({intersection_edit(host, n, attributes, v, bits), w});
    }
  }
  return WeightedEdits<S>::from_items(m, std::move(items));
}

template <Scalar S>
WeightedEdits<S> intersection_weights(std::size_t n, std::size_t attributes, const std::vector<S>& mu,
                                      EnumerationMode mode = EnumerationMode::explicit_list,
                                      std::size_t cap = kDefaultExplicitCap) {
  return intersection_weights<S>(n, attributes, std::span<const S>(mu), mode, cap);
}

// Edge-probability presets whose simple-process stationary law is the named
// edge-independent random graph.

template <Scalar S = double>
std::vector<S> erdos_renyi_probabilities(const HostGraph& g, S p) {
  std::vector<S> out(g.edge_count(), p);
  detail::check_open_unit<S>(out, g.edge_count());
  return out;
}

/// p_uv = k_u k_v / Σ_w k_w.
template <Scalar S = double>
std::vector<S> chung_lu_probabilities(const HostGraph& g, std::span<const S> expected_degree) {
  if (expected_degree.size() != g.vertex_count()) fail(Errc::length_mismatch, "one expected degree per vertex");
  S volume{0};
  for (const auto& k : expected_degree) volume += k;
  std::vector<S> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) out.push_back(expected_degree[e.u] * expected_degree[e.v] / volume);
  detail::check_open_unit<S>(out, g.edge_count());
  return out;
}

/// p inside a block, q across blocks.
template <Scalar S = double>
std::vector<S> stochastic_block_probabilities(const HostGraph& g, std::span<const std::size_t> block, S p, S q) {
  if (block.size() != g.vertex_count()) fail(Errc::length_mismatch, "one block label per vertex");
  std::vector<S> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) out.push_back(block[e.u] == block[e.v] ? p : q);
  detail::check_open_unit<S>(out, g.edge_count());
  return out;
}

}  // namespace editwalk
