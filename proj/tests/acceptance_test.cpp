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
// The acceptance suite: one test per contract, each printing a PASS/FAIL
// line with the measured values. Coverage and width targets come with their
// tolerances pinned in code; the exact checks (sweep-vs-pointwise agreement,
// inclusion lattice, size bounds) run at zero tolerance.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "setvote/setvote.hpp"
#include "support/oracle.hpp"

namespace setvote {
namespace {

void conclude(int criterion, const std::string& detail) {
  bool failed = ::testing::Test::HasFailure();
  std::printf("[criterion %2d] %s — %s\n", criterion, failed ? "FAIL" : "PASS", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* pattern, auto... values) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, values...);
  return std::string(buf);
}

TEST(Acceptance, Criterion01_PrivateIntervalWidth) {
  double width = 2.0 * private_hoeffding_half_width(100, 2.0, 0.1);
  EXPECT_NEAR(width, 0.3214, 5e-4);
  conclude(1, fmt("private interval width %.5f within 0.3214 +- 5e-4", width));
}

TEST(Acceptance, Criterion02_PrivateAgentsScenarioI) {
  ExperimentConfig cfg = default_config("private-agents");
  cfg.replications = 4000;  // criterion asks for at least 2000
  cfg.master_seed = 1;
  ExperimentReport report = run_private_agents(cfg);
  const ReportRow& majority = report.row("majority");
  const ReportRow& randomized = report.row("randomized");
  const ReportRow& rand_union = report.row("randomized-union");
  EXPECT_NEAR(majority.avg_width, 0.3058, 0.01);
  EXPECT_GE(majority.coverage, 0.99);
  EXPECT_NEAR(randomized.avg_width, 0.2282, 0.015);
  EXPECT_GE(randomized.coverage, 0.95);
  EXPECT_LE(randomized.coverage, 0.995);
  EXPECT_GE(rand_union.coverage, 0.975);
  EXPECT_LE(rand_union.coverage, 1.0);
  conclude(2, fmt("majority width %.4f cov %.4f | randomized width %.4f cov %.4f | union cov %.4f",
                  majority.avg_width, majority.coverage, randomized.avg_width,
                  randomized.coverage, rand_union.coverage));
}

TEST(Acceptance, Criterion03_WorstCaseTightness) {
  ExperimentConfig cfg = default_config("worst-case");
  cfg.replications = 100000;
  cfg.master_seed = 2;
  ExperimentReport report = run_worstcase_dependence(cfg);
  double agent_miss = 1.0 - report.row("agent").coverage;
  double mv_miss = 1.0 - report.row("majority").coverage;
  EXPECT_NEAR(agent_miss, 0.100, 0.005);
  EXPECT_NEAR(mv_miss, 0.5 / 3.0, 0.006);
  conclude(3, fmt("agent miscoverage %.4f (0.100 +- 0.005), majority %.4f (0.1667 +- 0.006)",
                  agent_miss, mv_miss));
}

// Pointwise predicate of the running-intersection rule on an ordered list.
bool exchangeable_member(const std::vector<Interval>& ordered, double s, double tau) {
  int votes = 0;
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    votes += ordered[k].contains(s) ? 1 : 0;
    if (!(double(votes) / double(k + 1) > tau)) return false;
  }
  return true;
}

TEST(Acceptance, Criterion04_SweepMatchesPointwiseEvaluationExactly) {
  Rng rng(404);
  long checks = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    testing::FamilyOptions opt;
    opt.weighted = trial % 2 == 1;
    WeightedFamily family = testing::random_family(rng, opt);
    const std::vector<Interval>& sets = family.sets();
    double tau = rng.uniform01() * 0.999;
    double u = rng.uniform01();
    double alpha = 0.01 + 0.98 * rng.uniform01();
    int quantile = binom_quantile(int(family.size()), alpha);

    IntervalUnion by_majority = merge_majority(family).merged;
    IntervalUnion by_tau = merge_tau(family, tau).merged;
    IntervalUnion by_rand = merge_randomized_at(family, u).merged;
    IntervalUnion by_union = merge_randomized_union_at(family, u).merged;
    IntervalUnion by_weighted = merge_weighted_at(family, u).merged;
    IntervalUnion by_indep = merge_independent(family, alpha).merged;
    IntervalUnion by_exch = merge_exchangeable(sets, tau).merged;
    MergeOutcome permuted = merge_permuted(sets, rng.bits(), tau);
    std::vector<Interval> permuted_order;
    for (std::size_t idx : *permuted.permutation) permuted_order.push_back(sets[idx]);

    for (double s : testing::probe_points(sets)) {
      double mass = testing::pointwise_mass(family, s);
      int votes = testing::pointwise_count(sets, s);
      ASSERT_EQ(by_majority.contains(s), mass > 0.5);
      ASSERT_EQ(by_tau.contains(s), mass > tau);
      ASSERT_EQ(by_rand.contains(s), mass > 0.5 + u / 2.0);
      ASSERT_EQ(by_union.contains(s), mass > u);
      ASSERT_EQ(by_weighted.contains(s), mass > 0.5 + u / 2.0);
      ASSERT_EQ(by_indep.contains(s), votes > quantile);
      if (family.uniform()) {
        ASSERT_EQ(by_exch.contains(s), exchangeable_member(sets, s, tau));
        ASSERT_EQ(permuted.merged.contains(s), exchangeable_member(permuted_order, s, tau));
      }
      checks += 6;
    }
  }
  conclude(4, fmt("%ld exact pointwise agreements across 1000 random families, zero tolerance",
                  checks));
}

TEST(Acceptance, Criterion05_SizeBounds) {
  Rng rng(505);
  testing::FamilyOptions opt;
  opt.unbounded_prob = 0.0;
  long violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<Interval> sets =
        testing::random_intervals(rng, 1 + int(rng.below(15)), opt);
    WeightedFamily uniform(sets);
    std::vector<double> weights;
    weights.reserve(sets.size());
    for (std::size_t k = 0; k < sets.size(); ++k) weights.push_back(0.05 + rng.uniform01());
    WeightedFamily weighted(sets, weights);

    double sum_width = 0.0, max_width = 0.0, weighted_width = 0.0;
    for (std::size_t k = 0; k < sets.size(); ++k) {
      double w = sets[k].width();
      sum_width += w;
      max_width = std::max(max_width, w);
      weighted_width += weighted.weights()[k] * w;
    }
    // Unweighted vote: measure at most (1/(K tau)) of the total width...
    double tau = 0.01 + 0.98 * rng.uniform01();
    if (merge_tau(uniform, tau).merged.measure() >
        sum_width / (double(sets.size()) * tau))
      ++violations;
    // ...and from tau >= 1/2 on, never wider than the widest input.
    double half_tau = 0.5 + 0.499 * rng.uniform01();
    if (merge_tau(uniform, half_tau).merged.measure() > max_width) ++violations;
    // Weighted randomized vote against twice the weighted width, any draw.
    double u = rng.uniform01();
    if (merge_weighted_at(weighted, u).merged.measure() > 2.0 * weighted_width) ++violations;
    if (merge_weighted_at(uniform, u).merged.measure() > 2.0 * sum_width / double(sets.size()))
      ++violations;
  }
  EXPECT_EQ(violations, 0);
  conclude(5, fmt("vote-size bounds on 10000 random bounded families, %ld violations",
                  violations));
}

TEST(Acceptance, Criterion06_InclusionLattice) {
  Rng rng(606);
  testing::FamilyOptions opt;
  long families = 0, equal_width_families = 0, equalities = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    WeightedFamily family = testing::random_family(rng, opt);
    const std::vector<Interval>& sets = family.sets();
    double u = rng.uniform01();
    std::vector<std::size_t> pi = rng.permutation(sets.size());

    IntervalUnion cm = merge_majority(family).merged;
    IntervalUnion cr = merge_randomized_at(family, u).merged;
    IntervalUnion cu = merge_randomized_union_at(family, u).merged;
    IntervalUnion ce = merge_exchangeable(sets, 0.5).merged;
    IntervalUnion cpi = merge_permuted_with(sets, pi, 0.5).merged;
    ASSERT_TRUE(subset_of(cr, cm));
    ASSERT_TRUE(subset_of(cr, cu));
    ASSERT_TRUE(subset_of(ce, cm));
    ASSERT_TRUE(subset_of(cpi, cm));
    ++families;
  }
  for (int trial = 0; trial < 1000; ++trial) {
    int count = 1 + int(rng.below(11));
    std::vector<Interval> sets = testing::random_equal_width(rng, count);
    IntervalUnion median = median_of_midpoints(sets);
    IntervalUnion cm = merge_majority(WeightedFamily(sets)).merged;
    ASSERT_TRUE(subset_of(cm, median));
    IntervalUnion common = IntervalUnion(Interval::whole_line());
    for (const Interval& iv : sets) common = intersect(common, IntervalUnion(iv));
    if (!common.empty()) {
      ASSERT_EQ(median, cm);
      ++equalities;
    }
    ++equal_width_families;
  }
  conclude(6, fmt("inclusion lattice exact on %ld families; median-of-midpoints contains the "
                  "vote on %ld equal-width families (%ld intersection equalities)",
                  families, equal_width_families, equalities));
}

TEST(Acceptance, Criterion07_IndependentSetsRule) {
  const long reps = 100000;
  const double z95 = normal_quantile(0.95);  // exact 0.9 coverage per interval
  long covered = 0;
  for (long i = 0; i < reps; ++i) {
    Rng rng(derive_seed(7, std::uint64_t(i)));
    std::vector<Interval> sets;
    sets.reserve(10);
    for (int k = 0; k < 10; ++k) {
      double center = rng.normal();
      sets.emplace_back(center - z95, center + z95);
    }
    covered += merge_independent(WeightedFamily(std::move(sets)), 0.1).merged.contains(0.0);
  }
  double coverage = double(covered) / double(reps);
  EXPECT_GE(coverage, 0.89);
  EXPECT_LE(coverage, 0.93);
  conclude(7, fmt("independent-rule coverage %.4f in [0.89, 0.93]", coverage));
}

TEST(Acceptance, Criterion08_MultisplitConformal) {
  ExperimentConfig cfg = default_config("multisplit-conformal");
  cfg.replications = 1000;
  cfg.master_seed = 8;
  ExperimentReport report = run_multisplit_conformal(cfg);
  const ReportRow& cm = report.row("majority");
  const ReportRow& ce = report.row("exchangeable");
  EXPECT_GE(ce.coverage, 0.89);
  EXPECT_EQ(report.extra("inclusion_violations"), 0.0);
  EXPECT_LE(ce.avg_width, cm.avg_width);
  conclude(8, fmt("running-intersection cov %.4f (>= 0.89), inside the vote set in 100%%, "
                  "width %.3f <= %.3f",
                  ce.coverage, ce.avg_width, cm.avg_width));
}

TEST(Acceptance, Criterion09_MomomStabilization) {
  ExperimentConfig cfg = default_config("momom");
  cfg.replications = 200;
  cfg.master_seed = 9;
  ExperimentReport report = run_momom(cfg);
  double early = report.extra("avg_delta_k5");
  double late = report.extra("avg_delta_k50");
  double in_band = report.row("momom").coverage;
  EXPECT_GE(early, 3.0 * late);
  EXPECT_GE(in_band, 0.95);
  conclude(9, fmt("step size %.5f at k=5 vs %.5f at k=50 (ratio %.1f >= 3); "
                  "final estimate within 0.25 of truth in %.1f%% of runs (>= 95%%)",
                  early, late, early / late, 100.0 * in_band));
}

TEST(Acceptance, Criterion10_HulcMom) {
  ExperimentConfig cfg = default_config("hulc-mom");
  cfg.replications = 1000;
  cfg.master_seed = 10;
  ExperimentReport report = run_hulc_mom(cfg);
  const ReportRow& cm = report.row("majority");
  const ReportRow& ce = report.row("exchangeable");
  EXPECT_EQ(report.extra("hull_buckets"), 6.0);
  EXPECT_GE(ce.coverage, 0.88);
  EXPECT_LE(ce.coverage, cm.coverage);
  EXPECT_EQ(report.extra("ce_width_monotone_violations"), 0.0);
  conclude(10, fmt("hull buckets 6; running-intersection cov %.4f in [0.88, cov(vote)=%.4f]; "
                   "running width nonincreasing in every run",
                   ce.coverage, cm.coverage));
}

TEST(Acceptance, Criterion11_RugerValidity) {
  ExperimentConfig cfg = default_config("ruger-validity");
  cfg.replications = 100000;
  cfg.master_seed = 11;
  ExperimentReport report = run_ruger_validity(cfg);
  double r01 = report.rows[0].coverage;
  double r05 = report.rows[1].coverage;
  double r10 = report.rows[2].coverage;
  EXPECT_LE(r01, 0.01 + 0.005);
  EXPECT_LE(r05, 0.05 + 0.005);
  EXPECT_LE(r10, 0.10 + 0.005);
  EXPECT_EQ(report.extra("randomized_above_plain"), 0.0);
  conclude(11, fmt("doubled-median rejection rates %.4f/%.4f/%.4f at 0.01/0.05/0.10; "
                   "randomized combination never above the plain rule",
                   r01, r05, r10));
}

TEST(Acceptance, Criterion12_RiskControl) {
  ExperimentConfig cfg = default_config("risk-control");
  cfg.replications = 10000;
  cfg.master_seed = 12;
  ExperimentReport report = run_risk_control(cfg);
  double input_risk = report.row("input").coverage;
  double merged_risk = report.row("majority").coverage;
  EXPECT_LE(input_risk, 0.1);
  EXPECT_LE(merged_risk, 0.2 + 0.01);

  // Indicator-loss reduction: with L_y identically B the loss vote equals the
  // membership majority vote, label by label, on 1000 random finite families.
  Rng rng(1212);
  long mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t labels = 1 + rng.below(10);
    std::size_t sets = 1 + rng.below(9);
    std::vector<std::vector<bool>> members(sets, std::vector<bool>(labels, false));
    for (auto& row : members)
      for (std::size_t y = 0; y < labels; ++y) row[y] = rng.bernoulli(0.5);
    double bound = 0.5 + rng.uniform01();
    LossSpec spec(std::vector<double>(labels, bound), bound);
    RiskMergeOutcome out = risk_merge_majority(LabelSetFamily(members), spec);
    for (std::size_t y = 0; y < labels; ++y) {
      int votes = 0;
      for (const auto& row : members) votes += row[y] ? 1 : 0;
      if (out.included[y] != (2 * votes > int(sets))) ++mismatches;
    }
  }
  EXPECT_EQ(mismatches, 0);
  conclude(12, fmt("input risk %.4f <= 0.1; merged risk %.4f <= 0.21; indicator reduction "
                   "matched majority vote on 1000 families (%ld mismatches)",
                   input_risk, merged_risk, mismatches));
}

}  // namespace
}  // namespace setvote
