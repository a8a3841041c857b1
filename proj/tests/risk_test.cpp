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

#include "setvote/risk.hpp"

#include <gtest/gtest.h>

#include "setvote/random.hpp"

namespace setvote {
namespace {

// Three labels with rising costs; sets {1,2}, {2}, {2,3} in 1-based terms.
LabelSetFamily example_family() {
  return LabelSetFamily({{true, true, false}, {false, true, false}, {false, true, true}});
}

LossSpec example_spec() { return LossSpec({0.2, 0.6, 1.0}, 1.0); }

TEST(LossSpec, Validation) {
  EXPECT_THROW(LossSpec({}, 1.0), std::invalid_argument);
  EXPECT_THROW(LossSpec({0.5}, 0.0), std::invalid_argument);
  EXPECT_THROW(LossSpec({1.5}, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(LossSpec({0.0, 1.0}, 1.0));
}

TEST(RiskMergeMajority, AverageLossBelowHalfBound) {
  RiskMergeOutcome out = risk_merge_majority(example_family(), example_spec());
  // Average losses: 0.2*(2/3)=0.133, 0, 1.0*(2/3)=0.667 against B/2 = 0.5.
  EXPECT_EQ(out.included, (std::vector<bool>{true, true, false}));
  EXPECT_FALSE(out.auto_included_any);
  EXPECT_EQ(out.set_size(), 2u);
}

TEST(RiskMergeMajority, PureMiscoverageLossReducesToMajorityVote) {
  Rng rng(4096);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t labels = 1 + rng.below(12);
    std::size_t sets = 1 + rng.below(9);
    std::vector<std::vector<bool>> members(sets, std::vector<bool>(labels));
    for (auto& row : members)
      for (std::size_t y = 0; y < labels; ++y) row[y] = rng.bernoulli(0.5);
    double bound = 0.25 + 2.0 * rng.uniform01();
    LossSpec spec(std::vector<double>(labels, bound), bound);
    RiskMergeOutcome out = risk_merge_majority(LabelSetFamily(members), spec);
    for (std::size_t y = 0; y < labels; ++y) {
      int votes = 0;
      for (const auto& row : members) votes += row[y] ? 1 : 0;
      bool majority = 2 * votes > int(sets);
      EXPECT_EQ(out.included[y], majority) << "label " << y;
    }
  }
}

TEST(RiskMergeMajority, CheapLabelsAutoInclude) {
  // A label with cost below B/2 stays in even when no input set has it.
  LabelSetFamily family({{false, true}, {false, true}});
  LossSpec spec({0.4, 1.0}, 1.0);
  RiskMergeOutcome out = risk_merge_majority(family, spec);
  EXPECT_EQ(out.included, (std::vector<bool>{true, true}));
  EXPECT_TRUE(out.auto_included_any);
}

TEST(RiskMergeWeighted, ForcedDraws) {
  RiskMergeOutcome full = risk_merge_weighted_at(example_family(), example_spec(), 1.0);
  EXPECT_EQ(full.included, risk_merge_majority(example_family(), example_spec()).included);
  // Threshold U*B/2 = 0.25: average losses 0.133 and 0 pass, 0.667 fails.
  RiskMergeOutcome half = risk_merge_weighted_at(example_family(), example_spec(), 0.5);
  EXPECT_EQ(half.included, (std::vector<bool>{true, true, false}));
  // U -> 0 keeps only labels with exactly zero weighted loss.
  RiskMergeOutcome zero = risk_merge_weighted_at(example_family(), example_spec(), 0.0);
  EXPECT_EQ(zero.included, (std::vector<bool>{false, false, false}));
}

TEST(RiskMergeWeighted, ZeroLossLabelsSurviveTinyThresholds) {
  LabelSetFamily family({{true, false}, {true, false}});
  LossSpec spec({1.0, 1.0}, 1.0);
  RiskMergeOutcome out = risk_merge_weighted_at(family, spec, 1e-12);
  EXPECT_EQ(out.included, (std::vector<bool>{true, false}));
}

TEST(RiskMerge, MonotoneInInputSets) {
  Rng rng(515);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t labels = 2 + rng.below(10);
    std::size_t sets = 1 + rng.below(7);
    std::vector<std::vector<bool>> members(sets, std::vector<bool>(labels));
    for (auto& row : members)
      for (std::size_t y = 0; y < labels; ++y) row[y] = rng.bernoulli(0.4);
    std::vector<double> costs(labels);
    for (double& c : costs) c = rng.uniform01();
    LossSpec spec(costs, 1.0);

    std::vector<std::vector<bool>> enlarged = members;
    std::size_t which = rng.below(sets);
    for (std::size_t y = 0; y < labels; ++y)
      if (rng.bernoulli(0.5)) enlarged[which][y] = true;

    RiskMergeOutcome before = risk_merge_majority(LabelSetFamily(members), spec);
    RiskMergeOutcome after = risk_merge_majority(LabelSetFamily(enlarged), spec);
    for (std::size_t y = 0; y < labels; ++y) {
      if (before.included[y]) {
        EXPECT_TRUE(after.included[y]);
      }
    }
  }
}

TEST(GammaCalibrate, SinglePointExample) {
  // One calibration point with true-label score 0.7 at alpha = 0.6 forces
  // gamma = 0.3, the first threshold where the point's loss vanishes.
  LossSpec spec({1.0, 1.0}, 1.0);
  std::vector<CalibrationExample> cal = {{{0.7, 0.3}, 0}};
  GammaCalibration out = gamma_calibrate(cal, spec, 0.6);
  EXPECT_FALSE(out.infeasible);
  EXPECT_NEAR(out.gamma, 0.3, 1e-12);
}

TEST(GammaCalibrate, PerfectScoresGiveZeroGamma) {
  LossSpec spec({1.0, 1.0}, 1.0);
  std::vector<CalibrationExample> cal = {{{1.0, 0.0}, 0}, {{0.0, 1.0}, 1}, {{1.0, 0.2}, 0}};
  GammaCalibration out = gamma_calibrate(cal, spec, 0.5);
  EXPECT_FALSE(out.infeasible);
  EXPECT_EQ(out.gamma, 0.0);
}

TEST(GammaCalibrate, GenerousAlphaPicksFirstFeasibleThreshold) {
  // alpha close to B: gamma = 0 still fails (both losses active), and the
  // first candidate that clears one point, 1 - 0.9 = 0.1, is feasible.
  LossSpec spec({1.0}, 1.0);
  std::vector<CalibrationExample> cal = {{{0.2}, 0}, {{0.9}, 0}};
  GammaCalibration out = gamma_calibrate(cal, spec, 0.99);
  EXPECT_FALSE(out.infeasible);
  EXPECT_NEAR(out.gamma, 0.1, 1e-12);
}

TEST(GammaCalibrate, InfeasibleReturnsFullSetWithWarning) {
  // n=1 makes the B/(n+1) floor equal 0.5 > alpha; nothing is feasible.
  LossSpec spec({1.0, 1.0}, 1.0);
  std::vector<CalibrationExample> cal = {{{0.9, 0.1}, 0}};
  GammaCalibration out = gamma_calibrate(cal, spec, 0.3);
  EXPECT_TRUE(out.infeasible);
  EXPECT_EQ(out.gamma, 1.0);
  EXPECT_THROW(gamma_calibrate(cal, spec, 1.5), std::invalid_argument);
}

TEST(GammaCalibrate, MinimalOnDenseGridScan) {
  Rng rng(1123);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t labels = 2 + rng.below(4);
    std::size_t n = 1 + rng.below(12);
    std::vector<double> costs(labels);
    for (double& c : costs) c = 0.2 + 0.8 * rng.uniform01();
    LossSpec spec(costs, 1.0);
    std::vector<CalibrationExample> cal;
    for (std::size_t i = 0; i < n; ++i) {
      CalibrationExample ex;
      ex.scores.resize(labels);
      for (double& s : ex.scores) s = rng.uniform01();
      ex.label = rng.below(labels);
      cal.push_back(std::move(ex));
    }
    double alpha = 0.05 + 0.9 * rng.uniform01();
    GammaCalibration out = gamma_calibrate(cal, spec, alpha);

    auto feasible = [&](double gamma) {
      double total = 0.0;
      for (const auto& ex : cal)
        if (ex.scores[ex.label] < 1.0 - gamma) total += spec.per_label_cost[ex.label];
      double dn = double(n);
      return (dn / (dn + 1.0)) * (total / dn) + spec.bound / (dn + 1.0) <= alpha;
    };
    if (out.infeasible) {
      for (int g = 0; g <= 1000; ++g) EXPECT_FALSE(feasible(double(g) / 1000.0));
    } else {
      EXPECT_TRUE(feasible(out.gamma));
      // No grid point strictly below the returned gamma is feasible.
      for (int g = 0; g <= 1000; ++g) {
        double gamma = double(g) / 1000.0;
        if (gamma < out.gamma - 1e-12) {
          EXPECT_FALSE(feasible(gamma)) << gamma;
        }
      }
    }
  }
}

}  // namespace
}  // namespace setvote
