#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "editwalk/error.hpp"

namespace editwalk {

/// Dense bitmask over at most 63 edges; the currency of the exact engine.
using Mask = std::uint64_t;

/// Largest edge count any enumeration API accepts (2^m states must be addressable).
inline constexpr std::size_t kMaxEnumerableEdges = 63;

/// A subset of the host's edges, stored as a bitset over edge indices 0..m-1.
///
/// The universe size m travels with the value so that operations between
/// sets from different hosts are rejected rather than silently truncated.
class EdgeSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  EdgeSet() = default;
  explicit EdgeSet(std::size_t universe) : universe_(universe), words_(word_count(universe), 0) {}

  EdgeSet(std::size_t universe, std::initializer_list<std::size_t> members) : EdgeSet(universe) {
    for (auto e : members) insert(e);
  }

  static EdgeSet full(std::size_t universe) {
    EdgeSet s(universe);
    std::fill(s.words_.begin(), s.words_.end(), ~Word{0});
    s.trim();
    return s;
  }

  static EdgeSet from_indices(std::size_t universe, std::span<const std::size_t> members) {
    EdgeSet s(universe);
    for (auto e : members) s.insert(e);
    return s;
  }

  static EdgeSet from_mask(std::size_t universe, Mask bits) {
    if (universe > kMaxEnumerableEdges) {
      fail(Errc::cap_exceeded, "bitmask views need m <= 63, got m = " + std::to_string(universe));
    }
    if (universe < 64 && (bits >> universe) != 0) {
      fail(Errc::edge_out_of_range, "mask has bits beyond m = " + std::to_string(universe));
    }
    EdgeSet s(universe);
    if (!s.words_.empty()) s.words_[0] = bits;
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }

  bool contains(std::size_t e) const {
    check_index(e);
    return (words_[e / kWordBits] >> (e % kWordBits)) & 1U;
  }

  void insert(std::size_t e) {
    check_index(e);
    words_[e / kWordBits] |= Word{1} << (e % kWordBits);
  }

  void erase(std::size_t e) {
    check_index(e);
    words_[e / kWordBits] &= ~(Word{1} << (e % kWordBits));
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool empty() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }

  bool is_subset_of(const EdgeSet& other) const {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

  bool intersects(const EdgeSet& other) const {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & other.words_[i]) return true;
    }
    return false;
  }

  EdgeSet complement() const {
    EdgeSet r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  EdgeSet& operator|=(const EdgeSet& o) { return combine(o, [](Word a, Word b) { return a | b; }); }
  EdgeSet& operator&=(const EdgeSet& o) { return combine(o, [](Word a, Word b) { return a & b; }); }
  EdgeSet& operator^=(const EdgeSet& o) { return combine(o, [](Word a, Word b) { return a ^ b; }); }
  EdgeSet& operator-=(const EdgeSet& o) { return combine(o, [](Word a, Word b) { return a & ~b; }); }

  friend EdgeSet operator|(EdgeSet a, const EdgeSet& b) { return a |= b; }
  friend EdgeSet operator&(EdgeSet a, const EdgeSet& b) { return a &= b; }
  friend EdgeSet operator^(EdgeSet a, const EdgeSet& b) { return a ^= b; }
  friend EdgeSet operator-(EdgeSet a, const EdgeSet& b) { return a -= b; }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

  /// Bitmask view; requires m <= 63.
  Mask mask() const {
    if (universe_ > kMaxEnumerableEdges) {
      fail(Errc::cap_exceeded, "bitmask views need m <= 63, got m = " + std::to_string(universe_));
    }
    return words_.empty() ? 0 : words_[0];
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t e) { out.push_back(e); });
    return out;
  }

  template <class F>
  void for_each(F&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits) {
        auto b = static_cast<std::size_t>(std::countr_zero(bits));
        fn(w * kWordBits + b);
        bits &= bits - 1;
      }
    }
  }

  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> mutable_words() noexcept { return words_; }

  /// Hex rendering of the bitmask, most significant word first ("0x5").
  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t w = words_.size(); w-- > 0;) {
      for (int nib = 15; nib >= 0; --nib) {
        auto d = static_cast<unsigned>((words_[w] >> (4 * nib)) & 0xF);
        if (out.empty() && d == 0) continue;
        out.push_back(kDigits[d]);
      }
    }
    if (out.empty()) out = "0";
    return "0x" + out;
  }

  static EdgeSet from_hex(std::size_t universe, std::string_view text) {
    if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
    if (text.empty()) fail(Errc::parse_error, "empty hex edge set");
    EdgeSet s(universe);
    std::size_t bit = 0;
    for (auto it = text.rbegin(); it != text.rend(); ++it, bit += 4) {
      char c = *it;
      unsigned d = 0;
      if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f') d = static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') d = static_cast<unsigned>(c - 'A' + 10);
      else fail(Errc::parse_error, "bad hex digit in edge set");
      for (unsigned k = 0; k < 4; ++k) {
        if ((d >> k) & 1U) {
          if (bit + k >= universe) fail(Errc::edge_out_of_range, "hex edge set exceeds m");
          s.insert(bit + k);
        }
      }
    }
    return s;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 1469598103934665603ULL ^ universe_;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  void check_same(const EdgeSet& other) const {
    if (universe_ != other.universe_) {
      fail(Errc::host_mismatch, "edge sets over m = " + std::to_string(universe_) + " and m = " +
                                    std::to_string(other.universe_));
    }
  }

 private:
  static std::size_t word_count(std::size_t universe) { return (universe + kWordBits - 1) / kWordBits; }

  void check_index(std::size_t e) const {
    if (e >= universe_) {
      fail(Errc::edge_out_of_range,
           "edge index " + std::to_string(e) + " with m = " + std::to_string(universe_));
    }
  }

  void trim() {
    if (universe_ % kWordBits != 0 && !words_.empty()) {
      words_.back() &= (Word{1} << (universe_ % kWordBits)) - 1;
    }
  }

  template <class Op>
  EdgeSet& combine(const EdgeSet& o, Op op) {
    check_same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = op(words_[i], o.words_[i]);
    return *this;
  }

  std::size_t universe_ = 0;
  std::vector<Word> words_;
};

struct EdgeSetHash {
  std::size_t operator()(const EdgeSet& s) const noexcept { return s.hash(); }
};

/// Order used for flats: by cardinality, then by bitmask value.
struct FlatOrder {
  bool operator()(const EdgeSet& a, const EdgeSet& b) const {
    auto ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    auto wa = a.words(), wb = b.words();
    return std::lexicographical_compare(wa.rbegin(), wa.rend(), wb.rbegin(), wb.rend());
  }
};

}  // namespace editwalk
