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
// One-shot rules for merging K dependent uncertainty intervals by (weighted,
// randomized) voting, plus the analytic coverage and size bound calculators.
// Every rule uses a strict ">" against its threshold. Randomized rules take
// either a seed (the draw is recorded in the outcome) or an explicit value of
// the randomization variable, so pipelines can prove a single draw was used.

#ifndef SETVOTE_MERGE_HPP
#define SETVOTE_MERGE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "setvote/interval.hpp"
#include "setvote/numeric.hpp"
#include "setvote/profile.hpp"
#include "setvote/random.hpp"

namespace setvote {

enum class MergeRule {
  majority,
  tau,
  randomized,        // threshold 1/2 + U/2
  randomized_union,  // threshold U
  weighted,
  independent,
  median_midpoints,
  nested_aware,
  exchangeable,
  permuted,
};

inline const char* to_string(MergeRule rule) {
  switch (rule) {
    case MergeRule::majority: return "majority";
    case MergeRule::tau: return "tau";
    case MergeRule::randomized: return "randomized";
    case MergeRule::randomized_union: return "randomized-union";
    case MergeRule::weighted: return "weighted";
    case MergeRule::independent: return "independent";
    case MergeRule::median_midpoints: return "median-midpoints";
    case MergeRule::nested_aware: return "nested-aware";
    case MergeRule::exchangeable: return "exchangeable";
    case MergeRule::permuted: return "permuted";
  }
  return "unknown";
}

// A merged set together with its audit trail: which rule ran, the effective
// threshold, and any randomization inputs (drawn value, seed, permutation).
struct MergeOutcome {
  IntervalUnion merged;
  MergeRule rule = MergeRule::majority;
  double threshold_used = 0.5;
  std::optional<double> randomization_value;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<std::size_t>> permutation;
};

// {s : sum_k w_k 1{s in C_k} > tau}. tau = 0 gives the union of the inputs;
// with uniform weights tau = (K-1)/K gives their intersection.
inline MergeOutcome merge_tau(const WeightedFamily& family, double tau) {
  if (!(tau >= 0.0 && tau < 1.0)) throw std::invalid_argument("merge_tau: tau must lie in [0,1)");
  MergeOutcome out;
  out.rule = MergeRule::tau;
  out.threshold_used = tau;
  out.merged = superlevel(build_profile(family), tau, /*strict=*/true);
  return out;
}

// Points voted by strictly more than half of the (weighted) mass.
inline MergeOutcome merge_majority(const WeightedFamily& family) {
  MergeOutcome out = merge_tau(family, 0.5);
  out.rule = MergeRule::majority;
  return out;
}

inline MergeOutcome merge_randomized_at(const WeightedFamily& family, double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("merge_randomized: u must lie in [0,1]");
  MergeOutcome out;
  out.rule = MergeRule::randomized;
  out.threshold_used = 0.5 + u / 2.0;
  out.randomization_value = u;
  out.merged = superlevel(build_profile(family), out.threshold_used, /*strict=*/true);
  return out;
}

// Randomized majority vote: threshold 1/2 + U/2 with U ~ Uniform(0,1).
// Never larger than the plain majority vote, with the same coverage floor.
inline MergeOutcome merge_randomized(const WeightedFamily& family, std::uint64_t seed) {
  Rng rng(seed);
  MergeOutcome out = merge_randomized_at(family, rng.uniform01());
  out.seed = seed;
  return out;
}

inline MergeOutcome merge_randomized_union_at(const WeightedFamily& family, double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("merge_randomized_union: u must lie in [0,1]");
  MergeOutcome out;
  out.rule = MergeRule::randomized_union;
  out.threshold_used = u;
  out.randomization_value = u;
  out.merged = superlevel(build_profile(family), u, /*strict=*/true);
  return out;
}

// Randomized union: threshold U itself. Keeps the inputs' coverage level and
// always contains the randomized majority vote built from the same draw.
inline MergeOutcome merge_randomized_union(const WeightedFamily& family, std::uint64_t seed) {
  Rng rng(seed);
  MergeOutcome out = merge_randomized_union_at(family, rng.uniform01());
  out.seed = seed;
  return out;
}

inline MergeOutcome merge_weighted_at(const WeightedFamily& family, double u) {
  MergeOutcome out = merge_randomized_at(family, u);
  out.rule = MergeRule::weighted;
  return out;
}

// Weighted vote at threshold 1/2 + U/2; randomize=false pins U = 0, which is
// the deterministic weighted majority vote.
inline MergeOutcome merge_weighted(const WeightedFamily& family, std::uint64_t seed,
                                   bool randomize) {
  if (!randomize) return merge_weighted_at(family, 0.0);
  Rng rng(seed);
  MergeOutcome out = merge_weighted_at(family, rng.uniform01());
  out.seed = seed;
  return out;
}

// Q_K(alpha) = sup{x integer : F(x) <= alpha}, F the CDF of Binom(K, 1-alpha).
// For K small enough that binomial coefficients are exact 64-bit integers the
// pmf terms are computed exactly, so representable boundaries (F(0) = alpha
// at K = 1, the symmetric ties at alpha = 1/2) resolve per the <= convention.
// Larger K uses the multiplicative recurrence with a log-space rescue for
// underflowed tails.
inline int binom_quantile(int k_sets, double alpha) {
  if (k_sets < 1) throw std::invalid_argument("binom_quantile: K must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("binom_quantile: alpha must lie in (0,1)");
  const long double fail = (long double)alpha;
  const long double success = 1.0L - fail;
  const bool exact_coefficients = k_sets <= 60;
  long double cdf = 0.0L;
  long double pmf = powl(fail, (long double)k_sets);
  int q = 0;
  for (int x = 0; x <= k_sets; ++x) {
    if (x > 0) {
      if (exact_coefficients) {
        pmf = (long double)choose_u64(k_sets, x) * powl(success, x) *
              powl(fail, k_sets - x);
      } else {
        pmf *= (long double)(k_sets - x + 1) / (long double)x * (success / fail);
        if (pmf == 0.0L) {
          double log_pmf = log_choose(k_sets, x) + double(x) * std::log1p(-alpha) +
                           double(k_sets - x) * std::log(alpha);
          pmf = expl((long double)log_pmf);
        }
      }
    }
    cdf += pmf;
    if (cdf <= fail) {
      q = x;
    } else {
      break;
    }
  }
  return q;
}

// Voting rule for independent sets around a fixed target: keep points voted
// by strictly more than Q_K(alpha) sets. Independence is asserted by the
// caller; it cannot be checked from one realization.
inline MergeOutcome merge_independent(const WeightedFamily& family, double alpha) {
  int q = binom_quantile(int(family.size()), alpha);
  MergeOutcome out;
  out.rule = MergeRule::independent;
  out.threshold_used = double(q) / double(family.size());
  out.merged = superlevel_count(build_profile(family), q);
  return out;
}

inline constexpr double kEqualWidthRelTolerance = 1e-9;

// Merge equal-width intervals through their midpoints: for odd K the interval
// whose midpoint is the (lower) median midpoint; for even K the intersection
// of the two middle ones. Always contains the majority vote of the same sets
// and never exceeds the common width.
inline IntervalUnion median_of_midpoints(std::span<const Interval> sets) {
  if (sets.empty()) throw std::invalid_argument("median_of_midpoints: empty input");
  double ref = sets.front().width();
  if (std::isinf(ref)) throw std::invalid_argument("median_of_midpoints: unbounded interval");
  for (const Interval& iv : sets) {
    if (std::isinf(iv.width()) ||
        std::fabs(iv.width() - ref) > kEqualWidthRelTolerance * std::max(1.0, std::fabs(ref)))
      throw std::invalid_argument("median_of_midpoints: intervals must have equal width");
  }
  std::size_t n = sets.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sets[a].midpoint() != sets[b].midpoint()) return sets[a].midpoint() < sets[b].midpoint();
    return a < b;  // deterministic on midpoint ties
  });
  if (n % 2 == 1) {
    return IntervalUnion(sets[order[n / 2]]);
  }
  const Interval& a = sets[order[n / 2 - 1]];
  const Interval& b = sets[order[n / 2]];
  auto common = intersect(a, b);
  if (!common) return IntervalUnion{};
  return IntervalUnion(*common);
}

// Majority vote after collapsing a declared nested chain to its smallest
// member. The chain must really be nested; surviving sets keep their original
// weights, renormalized.
inline MergeOutcome merge_nested_aware(const WeightedFamily& family,
                                       std::span<const std::size_t> chain) {
  for (std::size_t idx : chain)
    if (idx >= family.size())
      throw std::invalid_argument("merge_nested_aware: chain index out of range");
  if (chain.size() <= 1) {
    MergeOutcome out = merge_majority(family);
    out.rule = MergeRule::nested_aware;
    return out;
  }

  // Sort the declared chain so that each member must contain the previous
  // one, then verify the containments.
  std::vector<std::size_t> sorted_chain(chain.begin(), chain.end());
  std::sort(sorted_chain.begin(), sorted_chain.end(), [&](std::size_t a, std::size_t b) {
    const Interval& ia = family.sets()[a];
    const Interval& ib = family.sets()[b];
    if (ia.lower() != ib.lower()) return ia.lower() > ib.lower();
    if (ia.lower_closed() != ib.lower_closed()) return !ia.lower_closed();
    if (ia.upper() != ib.upper()) return ia.upper() < ib.upper();
    return !ia.upper_closed() && ib.upper_closed();
  });
  for (std::size_t i = 1; i < sorted_chain.size(); ++i) {
    if (!family.sets()[sorted_chain[i]].contains(family.sets()[sorted_chain[i - 1]]))
      throw std::invalid_argument("merge_nested_aware: declared chain is not nested");
  }

  std::size_t keep = sorted_chain.front();  // smallest chain member
  std::vector<Interval> reduced;
  std::vector<double> reduced_weights;
  for (std::size_t k = 0; k < family.size(); ++k) {
    bool in_chain = std::find(chain.begin(), chain.end(), k) != chain.end();
    if (in_chain && k != keep) continue;
    reduced.push_back(family.sets()[k]);
    reduced_weights.push_back(family.weights()[k]);
  }
  MergeOutcome out = merge_majority(WeightedFamily(std::move(reduced), std::move(reduced_weights)));
  out.rule = MergeRule::nested_aware;
  return out;
}

struct CoverageBound {
  double lower = 0.0;
  double upper = 1.0;
};

// Analytic coverage bounds for merging K level-(1-alpha) sets, clamped to
// [0,1]. The majority-vote upper bound assumes exact input coverage and is
// informative only for small K.
inline CoverageBound coverage_bounds(int k_sets, double alpha, MergeRule rule, double tau = 0.5) {
  if (k_sets < 2) throw std::invalid_argument("coverage_bounds: K must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("coverage_bounds: alpha must lie in (0,1)");
  auto clamp01 = [](double x) { return std::min(1.0, std::max(0.0, x)); };
  CoverageBound bound;
  switch (rule) {
    case MergeRule::majority: {
      // The integer-count structure sharpens the lower bound for odd K; the
      // upper bound assumes exact input coverage.
      double half_up = std::ceil(double(k_sets) / 2.0);
      double lower = (k_sets % 2 == 1) ? 1.0 - alpha * double(k_sets) / half_up : 1.0 - 2.0 * alpha;
      bound.lower = clamp01(lower);
      double upper = 1.0 - (double(k_sets) * alpha - half_up + 1.0) / (double(k_sets) - half_up + 1.0);
      bound.upper = clamp01(std::max(upper, bound.lower));
      break;
    }
    case MergeRule::randomized:
    case MergeRule::weighted:
      bound.lower = clamp01(1.0 - 2.0 * alpha);
      break;
    case MergeRule::tau:
    case MergeRule::exchangeable:
    case MergeRule::permuted: {
      // The running-intersection rules inherit the threshold-tau floor.
      if (!(tau >= 0.0 && tau < 1.0))
        throw std::invalid_argument("coverage_bounds: tau must lie in [0,1)");
      bound.lower = clamp01(1.0 - alpha / (1.0 - tau));
      break;
    }
    case MergeRule::randomized_union:
      bound.lower = clamp01(1.0 - alpha);
      break;
    case MergeRule::independent:
      bound.lower = clamp01(1.0 - alpha);
      break;
    default:
      throw std::invalid_argument("coverage_bounds: unsupported rule");
  }
  return bound;
}

// Lower coverage bound when the inputs have different levels 1-alpha_k:
// 1 - 2 sum_k w_k alpha_k.
inline double mixed_level_lower_bound(std::span<const double> weights,
                                      std::span<const double> alphas) {
  if (weights.size() != alphas.size() || weights.empty())
    throw std::invalid_argument("mixed_level_lower_bound: size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * alphas[k];
  return std::max(0.0, 1.0 - 2.0 * s);
}

inline double mixed_level_lower_bound(const WeightedFamily& family) {
  if (!family.has_levels())
    throw std::invalid_argument("mixed_level_lower_bound: family has no levels");
  return mixed_level_lower_bound(family.weights(), family.levels());
}

}  // namespace setvote

#endif  // SETVOTE_MERGE_HPP
