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

#include "setvote/sequential.hpp"

#include <gtest/gtest.h>

#include "setvote/random.hpp"
#include "support/oracle.hpp"

namespace setvote {
namespace {

std::vector<Interval> nested_sets() {
  return {Interval(0, 10), Interval(1, 9), Interval(3, 6)};
}

TEST(MergeExchangeable, NestedOrderKeepsMiddle) {
  MergeOutcome out = merge_exchangeable(nested_sets());
  EXPECT_EQ(out.merged, IntervalUnion(Interval(1, 9)));
  EXPECT_EQ(out.rule, MergeRule::exchangeable);
}

TEST(MergeExchangeable, OrderSensitivity) {
  std::vector<Interval> reordered = {Interval(3, 6), Interval(0, 10), Interval(1, 9)};
  EXPECT_EQ(merge_exchangeable(reordered).merged, IntervalUnion(Interval(3, 6)));
}

TEST(MergeExchangeable, IdenticalSetsPassThrough) {
  std::vector<Interval> copies(4, Interval(2, 5, false, true));
  EXPECT_EQ(merge_exchangeable(copies).merged, IntervalUnion(Interval(2, 5, false, true)));
}

TEST(MergeExchangeable, AlwaysInsideMajorityVote) {
  Rng rng(808);
  testing::FamilyOptions opt;
  opt.min_sets = 2;
  for (int trial = 0; trial < 400; ++trial) {
    WeightedFamily family = testing::random_family(rng, opt);
    double tau = trial % 2 == 0 ? 0.5 : 0.999 * rng.uniform01();
    IntervalUnion exch = merge_exchangeable(family.sets(), tau).merged;
    IntervalUnion majority = merge_tau(family, tau).merged;
    EXPECT_TRUE(subset_of(exch, majority));
  }
}

TEST(MergePermuted, IdentityPermutationMatchesExchangeable) {
  std::vector<Interval> sets = nested_sets();
  MergeOutcome out = merge_permuted_with(sets, {0, 1, 2});
  EXPECT_EQ(out.merged, merge_exchangeable(sets).merged);
  ASSERT_TRUE(out.permutation.has_value());
  EXPECT_EQ(out.permutation->size(), 3u);
}

TEST(MergePermuted, PairAlwaysIntersects) {
  std::vector<Interval> pair = {Interval(0, 5), Interval(3, 8)};
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    EXPECT_EQ(merge_permuted(pair, seed).merged, IntervalUnion(Interval(3, 5)));
  }
}

TEST(MergePermuted, InsideMajorityVoteForAnySeed) {
  Rng rng(117);
  testing::FamilyOptions opt;
  opt.min_sets = 2;
  for (int trial = 0; trial < 200; ++trial) {
    WeightedFamily family = testing::random_family(rng, opt);
    MergeOutcome out = merge_permuted(family.sets(), rng.bits());
    EXPECT_TRUE(subset_of(out.merged, merge_majority(family).merged));
    ASSERT_TRUE(out.permutation.has_value());
    // The recorded permutation reproduces the outcome.
    EXPECT_EQ(merge_permuted_with(family.sets(), *out.permutation).merged, out.merged);
  }
}

TEST(SequentialMerger, FirstUpdateIsTheSetItself) {
  SequentialMerger merger;
  EXPECT_EQ(merger.update(Interval(0, 10)), IntervalUnion(Interval(0, 10)));
  EXPECT_EQ(merger.step_count(), 1u);
}

TEST(SequentialMerger, PairIntersects) {
  SequentialMerger merger;
  merger.update(Interval(0, 10));
  EXPECT_EQ(merger.update(Interval(1, 9)), IntervalUnion(Interval(1, 9)));
}

TEST(SequentialMerger, StreamingMatchesBatchOnRandomSequences) {
  Rng rng(606);
  testing::FamilyOptions opt;
  for (int trial = 0; trial < 200; ++trial) {
    int count = 1 + int(rng.below(10));
    std::vector<Interval> sets = testing::random_intervals(rng, count, opt);
    double tau = trial % 2 == 0 ? 0.5 : 0.999 * rng.uniform01();
    SequentialMerger merger(tau);
    IntervalUnion last;
    std::vector<IntervalUnion> trace;
    for (const Interval& iv : sets) {
      last = merger.update(iv);
      trace.push_back(last);
    }
    EXPECT_EQ(last, merge_exchangeable(sets, tau).merged);
    // Monotone refinement: running sets only shrink.
    for (std::size_t t = 1; t < trace.size(); ++t)
      EXPECT_TRUE(subset_of(trace[t], trace[t - 1]));
  }
}

TEST(SequentialMerger, StabilizationAfterQuietUpdates) {
  SequentialMerger merger(0.5);
  for (int i = 0; i < 3; ++i) merger.update(Interval(0, 10));
  EXPECT_FALSE(merger.stabilized(3));
  merger.update(Interval(0, 10));
  EXPECT_TRUE(merger.stabilized(3));  // three consecutive unchanged updates
  // Four shifted sets tie the vote at the 8th update, flipping the prefix
  // majority to [5,10] and resetting the quiet run.
  for (int i = 0; i < 4; ++i) merger.update(Interval(5, 20));
  EXPECT_EQ(merger.running(), IntervalUnion(Interval(5, 10)));
  EXPECT_FALSE(merger.stabilized(3));
}

TEST(SequentialMerger, BoundedHistory) {
  SequentialMerger merger(0.5, 2);
  for (int i = 0; i < 5; ++i) merger.update(Interval(0, 10));
  EXPECT_EQ(merger.history().size(), 2u);
}

// Feeding exchangeable level-0.9 intervals through the streaming merger, the
// chance of the running set ever dropping the target stays within the
// doubled miscoverage budget, uniformly over time.
TEST(SequentialMerger, TimeUniformMiscoverageWithinDoubledBudget) {
  const double alpha = 0.1;
  const double width = 1.6448536269514722;  // z at 0.95: exact 0.9 marginal coverage
  const double root_half = std::sqrt(0.5);
  const int horizon = 20;
  const long reps = 5000;
  long ever_missed = 0;
  Rng rng(161803);
  for (long i = 0; i < reps; ++i) {
    double common = root_half * rng.normal();
    SequentialMerger merger;
    bool missed = false;
    for (int t = 0; t < horizon; ++t) {
      double center = common + root_half * rng.normal();
      merger.update(Interval(center - width, center + width));
      missed = missed || !merger.running().contains(0.0);
    }
    ever_missed += missed ? 1 : 0;
  }
  double rate = double(ever_missed) / double(reps);
  EXPECT_LE(rate, 2.0 * alpha + 3.0 * std::sqrt(2.0 * alpha / double(reps)));
}

TEST(ConfidenceSequences, IdenticalStreamsPassThrough) {
  std::vector<Interval> stream = {Interval(0, 10), Interval(1, 8), Interval(2, 6)};
  std::vector<std::vector<Interval>> streams(3, stream);
  std::vector<IntervalUnion> merged = merge_confidence_sequences(streams);
  ASSERT_EQ(merged.size(), 3u);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(merged[t], IntervalUnion(stream[t]));
}

TEST(ConfidenceSequences, TwoStreamsIntersectPerTime) {
  std::vector<std::vector<Interval>> streams = {
      {Interval(0, 4), Interval(1, 5)},
      {Interval(2, 8), Interval(3, 9)},
  };
  std::vector<IntervalUnion> merged = merge_confidence_sequences(streams);
  EXPECT_EQ(merged[0], IntervalUnion(Interval(2, 4)));
  EXPECT_EQ(merged[1], IntervalUnion(Interval(3, 5)));
}

TEST(ConfidenceSequences, NestedStreamsAtFixedTime) {
  std::vector<std::vector<Interval>> streams = {
      {Interval(0, 10)}, {Interval(1, 9)}, {Interval(3, 6)}};
  std::vector<IntervalUnion> merged = merge_confidence_sequences(streams);
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged[0], IntervalUnion(Interval(1, 9)));
}

TEST(ConfidenceSequences, RejectsRaggedStreams) {
  std::vector<std::vector<Interval>> streams = {
      {Interval(0, 4), Interval(1, 5)},
      {Interval(2, 8)},
  };
  EXPECT_THROW(merge_confidence_sequences(streams), std::invalid_argument);
}

}  // namespace
}  // namespace setvote
