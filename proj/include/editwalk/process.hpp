#pragma once

// Trajectory simulation of edit processes.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "editwalk/edge_set.hpp"
#include "editwalk/edit.hpp"
#include "editwalk/error.hpp"
#include "editwalk/random.hpp"
#include "editwalk/scalar.hpp"
#include "editwalk/weights.hpp"

namespace editwalk {

/// Draws edits from a distribution: alias table for explicit lists, the
/// closed-form sampler for lazy ones.
template <Scalar S>
class EditSampler {
 public:
  explicit EditSampler(const WeightedEdits<S>& dist) : dist_(&dist) {
    if (!dist.is_lazy()) {
      std::vector<double> w;
      w.reserve(dist.items().size());
      for (const auto& it : dist.items()) w.push_back(to_double(it.weight));
      table_ = AliasTable(w);
    }
  }

  /// Applies one sampled edit to `state` in place.
  void step(EdgeSet& state, Rng& rng) const {
    if constexpr (std::same_as<S, double>) {
      if (dist_->is_lazy()) {
        dist_->lazy().draw(rng).apply_in_place(state);
        return;
      }
    }
    dist_->items()[table_.sample(rng)].edit.apply_in_place(state);
  }

  Edit draw(Rng& rng) const {
    if constexpr (std::same_as<S, double>) {
      if (dist_->is_lazy()) return dist_->lazy().draw(rng);
    }
    return dist_->items()[table_.sample(rng)].edit;
  }

 private:
  const WeightedEdits<S>* dist_;
  AliasTable table_;
};

template <Scalar S>
EdgeSet step(const WeightedEdits<S>& dist, EdgeSet state, Rng& rng) {
  if (state.universe() != dist.universe()) fail(Errc::host_mismatch, "state over a different host");
  EditSampler<S>(dist).step(state, rng);
  return state;
}

struct Snapshot {
  std::uint64_t t = 0;
  EdgeSet state;
};

/// Recorded run: the state at t = 0, every `thin`-th step, and the last step.
struct Trajectory {
  EdgeSet initial;
  std::vector<Snapshot> snapshots;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t steps = 0;
  std::uint64_t thin = 1;

  const EdgeSet& final_state() const { return snapshots.back().state; }
};

template <Scalar S>
Trajectory simulate(const WeightedEdits<S>& dist, const EdgeSet& initial, std::uint64_t steps, Rng& rng,
                    std::uint64_t thin = 1) {
  if (initial.universe() != dist.universe()) fail(Errc::host_mismatch, "initial state over a different host");
  if (thin == 0) thin = 1;
  Trajectory traj;
  traj.initial = initial;
  traj.seed = rng.seed();
  traj.stream = rng.stream();
  traj.steps = steps;
  traj.thin = thin;
  traj.snapshots.push_back({0, initial});
  const EditSampler<S> sampler(dist);
  EdgeSet state = initial;
  for (std::uint64_t t = 1; t <= steps; ++t) {
    sampler.step(state, rng);
    if (t % thin == 0 || t == steps) traj.snapshots.push_back({t, state});
  }
  return traj;
}

/// Normalized histogram over all 2^m states (indexed by bitmask) of `samples`
/// draws taken every `stride` steps after `burn_in` steps from `initial`.
template <Scalar S>
std::vector<double> empirical_distribution(const WeightedEdits<S>& dist, const EdgeSet& initial,
                                           std::uint64_t burn_in, std::uint64_t samples, std::uint64_t stride,
                                           Rng& rng) {
  const std::size_t m = dist.universe();
  if (m > 20) fail(Errc::cap_exceeded, "histograms over 2^m states need m <= 20");
  if (samples == 0) fail(Errc::bad_distribution, "samples must be positive");
  if (stride == 0) stride = 1;
  const EditSampler<S> sampler(dist);
  EdgeSet state = initial;
  for (std::uint64_t t = 0; t < burn_in; ++t) sampler.step(state, rng);
  std::vector<double> hist(std::size_t{1} << m, 0.0);
  for (std::uint64_t k = 0; k < samples; ++k) {
    for (std::uint64_t s = 0; s < stride; ++s) sampler.step(state, rng);
    hist[state.mask()] += 1.0;
  }
  for (auto& h : hist) h /= static_cast<double>(samples);
  return hist;
}

}  // namespace editwalk
