#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "editwalk/error.hpp"

namespace editwalk {

/// Seeded 64-bit generator. Streams are derived from (seed, stream index)
/// through std::seed_seq, and all derived variates use only raw engine
/// output, so trajectories are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., n-1}, unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) fail(Errc::bad_distribution, "below(0)");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      auto r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// Walker/Vose alias table: O(n) build, O(1) draw.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) fail(Errc::bad_distribution, "alias table needs at least one weight");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) fail(Errc::bad_distribution, "negative weight");
      total += w;
    }
    if (!(total > 0.0)) fail(Errc::bad_distribution, "weights sum to zero");
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      auto s = small.back();
      small.pop_back();
      auto l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob_[i] = 1.0;
    for (auto i : small) prob_[i] = 1.0;
  }

  std::size_t size() const noexcept { return prob_.size(); }

  std::size_t sample(Rng& rng) const {
    auto column = static_cast<std::size_t>(rng.below(prob_.size()));
    return rng.uniform() < prob_[column] ? column : alias_[column];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace editwalk
