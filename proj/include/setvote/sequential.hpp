// Copyright 2026 The setvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Order-sensitive merging: the running intersection of prefix majority votes.
// For exchangeable inputs (or after a random permutation) the result keeps
// the majority vote's coverage while never being larger than it; fed one set
// at a time it forms a confidence sequence over the number of sets.

#ifndef SETVOTE_SEQUENTIAL_HPP
#define SETVOTE_SEQUENTIAL_HPP

#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "setvote/merge.hpp"

namespace setvote {

namespace detail {
inline IntervalUnion prefix_vote(std::span<const Interval> prefix, double tau) {
  WeightedFamily family(std::vector<Interval>(prefix.begin(), prefix.end()));
  return superlevel(build_profile(family), tau, /*strict=*/true);
}
}  // namespace detail

// Intersection over k <= K of the vote sets of the first k inputs, i.e.
// {s : (1/k) sum_{j<=k} 1{s in C_j} > tau for all k <= K}. Always a subset of
// the full-family vote set.
inline MergeOutcome merge_exchangeable(std::span<const Interval> sets, double tau = 0.5) {
  if (sets.empty()) throw std::invalid_argument("merge_exchangeable: empty input");
  if (!(tau >= 0.0 && tau < 1.0))
    throw std::invalid_argument("merge_exchangeable: tau must lie in [0,1)");
  IntervalUnion running = detail::prefix_vote(sets.subspan(0, 1), tau);
  for (std::size_t k = 2; k <= sets.size(); ++k) {
    running = intersect(running, detail::prefix_vote(sets.subspan(0, k), tau));
    if (running.empty()) break;
  }
  MergeOutcome out;
  out.rule = MergeRule::exchangeable;
  out.threshold_used = tau;
  out.merged = std::move(running);
  return out;
}

inline MergeOutcome merge_permuted_with(std::span<const Interval> sets,
                                        std::vector<std::size_t> permutation, double tau = 0.5) {
  if (permutation.size() != sets.size())
    throw std::invalid_argument("merge_permuted: permutation size mismatch");
  std::vector<Interval> ordered;
  ordered.reserve(sets.size());
  for (std::size_t idx : permutation) {
    if (idx >= sets.size()) throw std::invalid_argument("merge_permuted: bad permutation");
    ordered.push_back(sets[idx]);
  }
  MergeOutcome out = merge_exchangeable(ordered, tau);
  out.rule = MergeRule::permuted;
  out.permutation = std::move(permutation);
  return out;
}

// Process the sets in a uniformly random order; the permutation makes them
// exchangeable, so the running-intersection guarantee applies to arbitrary
// dependence. The drawn permutation is recorded in the outcome.
inline MergeOutcome merge_permuted(std::span<const Interval> sets, std::uint64_t seed,
                                   double tau = 0.5) {
  Rng rng(seed);
  MergeOutcome out = merge_permuted_with(sets, rng.permutation(sets.size()), tau);
  out.seed = seed;
  return out;
}

// Streaming form: feed sets one at a time; after t updates running() equals
// merge_exchangeable of the first t sets. Memory is the arrived endpoints
// plus an optional bounded history of prefix vote sets. Single writer; the
// running set may be read concurrently while no update is in progress.
class SequentialMerger {
 public:
  explicit SequentialMerger(double tau = 0.5, std::size_t history_limit = 0)
      : tau_(tau), history_limit_(history_limit) {
    if (!(tau >= 0.0 && tau < 1.0))
      throw std::invalid_argument("SequentialMerger: tau must lie in [0,1)");
  }

  const IntervalUnion& update(const Interval& next) {
    arrived_.push_back(next);
    IntervalUnion prefix = detail::prefix_vote(arrived_, tau_);
    if (history_limit_ > 0) {
      history_.push_back(prefix);
      while (history_.size() > history_limit_) history_.pop_front();
    }
    IntervalUnion updated =
        arrived_.size() == 1 ? std::move(prefix) : intersect(running_, prefix);
    if (arrived_.size() > 1 && updated == running_) {
      ++unchanged_run_;
    } else {
      unchanged_run_ = 0;
    }
    running_ = std::move(updated);
    return running_;
  }

  const IntervalUnion& running() const { return running_; }
  std::size_t step_count() const { return arrived_.size(); }
  double tau() const { return tau_; }
  const std::deque<IntervalUnion>& history() const { return history_; }

  // True once the running set has survived `patience` consecutive updates
  // unchanged; a practical point to stop collecting further sets.
  bool stabilized(std::size_t patience = 5) const { return unchanged_run_ >= patience; }

 private:
  double tau_;
  std::size_t history_limit_;
  std::vector<Interval> arrived_;
  IntervalUnion running_;
  std::deque<IntervalUnion> history_;
  std::size_t unchanged_run_ = 0;
};

// Majority vote across K parallel confidence sequences, applied per time
// index. All streams must have equal length.
inline std::vector<IntervalUnion> merge_confidence_sequences(
    const std::vector<std::vector<Interval>>& streams) {
  if (streams.empty()) throw std::invalid_argument("merge_confidence_sequences: no streams");
  std::size_t horizon = streams.front().size();
  for (const auto& s : streams)
    if (s.size() != horizon)
      throw std::invalid_argument("merge_confidence_sequences: mismatched stream lengths");
  std::vector<IntervalUnion> merged;
  merged.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    std::vector<Interval> slice;
    slice.reserve(streams.size());
    for (const auto& s : streams) slice.push_back(s[t]);
    merged.push_back(merge_majority(WeightedFamily(std::move(slice))).merged);
  }
  return merged;
}

}  // namespace setvote

#endif  // SETVOTE_SEQUENTIAL_HPP
