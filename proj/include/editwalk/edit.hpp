#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "editwalk/edge_set.hpp"
#include "editwalk/error.hpp"

namespace editwalk {

enum class Sign : unsigned char { plus, minus };

/// An element of the graph edit semigroup in reduced form.
///
/// A reduced edit is a partial sign map over edge indices: `+` on the edges it
/// adds, `-` on the edges it deletes, undefined elsewhere. The two sign sets
/// are disjoint and their union is the support. The empty map is the identity.
class Edit {
 public:
  Edit() = default;
  explicit Edit(std::size_t universe) : plus_(universe), minus_(universe) {}

  /// Builds from explicit sign sets; they must be disjoint.
  Edit(EdgeSet plus, EdgeSet minus) : plus_(std::move(plus)), minus_(std::move(minus)) {
    plus_.check_same(minus_);
    if (plus_.intersects(minus_)) fail(Errc::parse_error, "edit assigns both signs to one edge");
    refresh_span();
  }

  std::size_t universe() const noexcept { return plus_.universe(); }
  const EdgeSet& plus() const noexcept { return plus_; }
  const EdgeSet& minus() const noexcept { return minus_; }
  EdgeSet support() const { return plus_ | minus_; }
  bool is_identity() const { return plus_.empty() && minus_.empty(); }

  std::optional<Sign> sign(std::size_t e) const {
    if (plus_.contains(e)) return Sign::plus;
    if (minus_.contains(e)) return Sign::minus;
    return std::nullopt;
  }

  /// E <- (E | plus) & ~minus, touching only words the edit acts on.
  void apply_in_place(EdgeSet& state) const {
    plus_.check_same(state);
    auto words = state.mutable_words();
    auto p = plus_.words();
    auto q = minus_.words();
    for (std::size_t w = first_word_; w < last_word_; ++w) words[w] = (words[w] | p[w]) & ~q[w];
  }

  friend bool operator==(const Edit& a, const Edit& b) {
    return a.plus_ == b.plus_ && a.minus_ == b.minus_;
  }

  std::size_t hash() const noexcept { return plus_.hash() * 31 + minus_.hash(); }

 private:
  void refresh_span() {
    auto p = plus_.words();
    auto q = minus_.words();
    first_word_ = p.size();
    last_word_ = 0;
    for (std::size_t w = 0; w < p.size(); ++w) {
      if (p[w] | q[w]) {
        first_word_ = std::min(first_word_, w);
        last_word_ = w + 1;
      }
    }
    if (last_word_ == 0) first_word_ = 0;
  }

  EdgeSet plus_;
  EdgeSet minus_;
  std::size_t first_word_ = 0;
  std::size_t last_word_ = 0;
};

struct EditHash {
  std::size_t operator()(const Edit& x) const noexcept { return x.hash(); }
};

inline Edit identity_edit(std::size_t universe) { return Edit(universe); }

inline Edit simple_edit(std::size_t universe, std::size_t e, Sign s) {
  if (e >= universe) {
    fail(Errc::edge_out_of_range, "edge " + std::to_string(e) + " with m = " + std::to_string(universe));
  }
  EdgeSet plus(universe), minus(universe);
  (s == Sign::plus ? plus : minus).insert(e);
  return Edit(std::move(plus), std::move(minus));
}

/// Semigroup product xy: apply y first, then x. x's signs win where both act.
inline Edit compose(const Edit& x, const Edit& y) {
  if (x.universe() != y.universe()) fail(Errc::host_mismatch, "edits over different hosts");
  EdgeSet sx = x.support();
  return Edit(x.plus() | (y.plus() - sx), x.minus() | (y.minus() - sx));
}

inline EdgeSet apply(const Edit& x, EdgeSet state) {
  if (x.universe() != state.universe()) fail(Errc::host_mismatch, "edit and state over different hosts");
  x.apply_in_place(state);
  return state;
}

inline EdgeSet supp(const Edit& x) { return x.support(); }

/// x <= y iff y agrees with every sign of x (equivalently xy = y).
inline bool leq(const Edit& x, const Edit& y) {
  if (x.universe() != y.universe()) fail(Errc::host_mismatch, "edits over different hosts");
  return x.plus().is_subset_of(y.plus()) && x.minus().is_subset_of(y.minus());
}

/// x precedes y iff supp x is inside supp y (equivalently yx = y).
inline bool prec(const Edit& x, const Edit& y) {
  if (x.universe() != y.universe()) fail(Errc::host_mismatch, "edits over different hosts");
  return x.support().is_subset_of(y.support());
}

/// The chamber identified with state E: + on E, - on every other edge.
inline Edit chamber_of(const EdgeSet& state) { return Edit(state, state.complement()); }

inline EdgeSet state_of(const Edit& chamber) {
  if (chamber.support() != EdgeSet::full(chamber.universe())) {
    fail(Errc::not_a_chamber, "edit does not act on every edge");
  }
  return chamber.plus();
}

/// Parses "+0 -3 +5" as the product (+0)(-3)(+5); the rightmost factor acts
/// first. "" and "id" denote the identity.
inline Edit parse_edit(std::size_t universe, std::string_view text) {
  Edit result(universe);
  std::istringstream in{std::string(text)};
  std::string token;
  std::vector<Edit> factors;
  while (in >> token) {
    if (token == "id") continue;
    if (token.size() < 2 || (token[0] != '+' && token[0] != '-')) {
      fail(Errc::parse_error, "bad edit token '" + token + "'");
    }
    std::size_t e = 0;
    for (std::size_t i = 1; i < token.size(); ++i) {
      if (token[i] < '0' || token[i] > '9') fail(Errc::parse_error, "bad edit token '" + token + "'");
      e = e * 10 + static_cast<std::size_t>(token[i] - '0');
    }
    factors.push_back(simple_edit(universe, e, token[0] == '+' ? Sign::plus : Sign::minus));
  }
  for (const auto& f : factors) result = compose(result, f);
  return result;
}

/// Canonical text: signed edge indices in increasing index order, or "id".
inline std::string format_edit(const Edit& x) {
  if (x.is_identity()) return "id";
  std::string out;
  for (std::size_t e = 0; e < x.universe(); ++e) {
    auto s = x.sign(e);
    if (!s) continue;
    if (!out.empty()) out.push_back(' ');
    out.push_back(*s == Sign::plus ? '+' : '-');
    out += std::to_string(e);
  }
  return out;
}

}  // namespace editwalk
