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
// The vote profile of a weighted interval family: the piecewise-constant map
// g(s) = sum_k w_k * 1{s in C_k}. The sorted distinct endpoints split the
// line into alternating open gaps and single points; g is constant on each
// such cell and is computed per cell as a direct sum over the family in index
// order. Evaluating g at any point therefore gives bit-identical results to
// summing memberships by hand, including at shared endpoints with mixed
// open/closed flags. Superlevel sets {s : g(s) > tau} fall out exactly.

#ifndef SETVOTE_PROFILE_HPP
#define SETVOTE_PROFILE_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "setvote/interval.hpp"

namespace setvote {

inline constexpr double kWeightSumTolerance = 1e-12;

// K intervals with a normalized weight vector and optional per-set
// miscoverage levels. Weights are validated (nonnegative, positive sum) and
// rescaled to sum to one at construction; equal weights are detected so that
// voting can use exact integer counts.
class WeightedFamily {
 public:
  explicit WeightedFamily(std::vector<Interval> sets)
      : sets_(std::move(sets)), uniform_(true) {
    if (sets_.empty()) throw std::invalid_argument("WeightedFamily: needs at least one set");
    weights_.assign(sets_.size(), 1.0 / double(sets_.size()));
  }

  WeightedFamily(std::vector<Interval> sets, std::vector<double> weights)
      : sets_(std::move(sets)), weights_(std::move(weights)) {
    if (sets_.empty()) throw std::invalid_argument("WeightedFamily: needs at least one set");
    if (weights_.size() != sets_.size())
      throw std::invalid_argument("WeightedFamily: weight count mismatch");
    double sum = 0.0;
    for (double w : weights_) {
      if (std::isnan(w) || w < 0.0)
        throw std::invalid_argument("WeightedFamily: weights must be nonnegative");
      sum += w;
    }
    if (!(sum > 0.0) || std::isinf(sum))
      throw std::invalid_argument("WeightedFamily: weights must have positive finite sum");
    if (sum != 1.0) {
      for (double& w : weights_) w /= sum;
    }
    uniform_ = std::all_of(weights_.begin(), weights_.end(),
                           [&](double w) { return w == weights_.front(); });
  }

  WeightedFamily(std::vector<Interval> sets, std::vector<double> weights,
                 std::vector<double> levels)
      : WeightedFamily(std::move(sets), std::move(weights)) {
    if (levels.size() != sets_.size())
      throw std::invalid_argument("WeightedFamily: level count mismatch");
    for (double a : levels)
      if (!(a >= 0.0 && a <= 1.0))
        throw std::invalid_argument("WeightedFamily: levels must lie in [0,1]");
    levels_ = std::move(levels);
  }

  std::size_t size() const { return sets_.size(); }
  const std::vector<Interval>& sets() const { return sets_; }
  const std::vector<double>& weights() const { return weights_; }
  bool uniform() const { return uniform_; }
  bool has_levels() const { return !levels_.empty(); }
  const std::vector<double>& levels() const { return levels_; }

  // Weighted vote mass at a single point, summing in set order. For equal
  // weights this is the exact rational count/K.
  double mass_at(double s) const {
    if (uniform_) return double(count_at(s)) / double(sets_.size());
    double m = 0.0;
    for (std::size_t k = 0; k < sets_.size(); ++k)
      if (sets_[k].contains(s)) m += weights_[k];
    return m;
  }

  int count_at(double s) const {
    int c = 0;
    for (const Interval& iv : sets_) c += iv.contains(s) ? 1 : 0;
    return c;
  }

 private:
  std::vector<Interval> sets_;
  std::vector<double> weights_;
  std::vector<double> levels_;
  bool uniform_ = false;
};

// Piecewise-constant vote mass over the cells induced by the family's
// endpoints. With m distinct finite endpoints v_0 < ... < v_{m-1} there are
// 2m+1 cells: gap (v_{i-1}, v_i), point {v_i}, alternating, with unbounded
// outer gaps. Cell index 2i+1 is the point v_i; even indices are gaps.
class VoteProfile {
 public:
  const std::vector<double>& breakpoints() const { return values_; }
  int set_count() const { return set_count_; }
  std::size_t cell_count() const { return counts_.size(); }

  int count_in_cell(std::size_t cell) const { return counts_[cell]; }
  double mass_in_cell(std::size_t cell) const { return masses_[cell]; }

  double mass_at(double s) const { return masses_[cell_of(s)]; }
  int count_at(double s) const { return counts_[cell_of(s)]; }

  double max_mass() const {
    double m = 0.0;
    for (double x : masses_) m = std::max(m, x);
    return m;
  }

  // Gap cell g covers the open interval (lower_of_gap(g), upper_of_gap(g)).
  double gap_lower(std::size_t gap_index) const {
    return gap_index == 0 ? -kInf : values_[gap_index - 1];
  }
  double gap_upper(std::size_t gap_index) const {
    return gap_index == values_.size() ? kInf : values_[gap_index];
  }

  std::size_t cell_of(double s) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), s);
    std::size_t i = std::size_t(it - values_.begin());
    if (it != values_.end() && *it == s) return 2 * i + 1;  // the point cell
    return 2 * i;                                           // gap before values_[i]
  }

  friend VoteProfile build_profile(const WeightedFamily& family);

 private:
  std::vector<double> values_;  // sorted distinct finite endpoints
  std::vector<int> counts_;     // per cell
  std::vector<double> masses_;  // per cell
  int set_count_ = 0;
};

inline VoteProfile build_profile(const WeightedFamily& family) {
  VoteProfile profile;
  profile.set_count_ = int(family.size());

  std::vector<double>& values = profile.values_;
  for (const Interval& iv : family.sets()) {
    if (!std::isinf(iv.lower())) values.push_back(iv.lower());
    if (!std::isinf(iv.upper())) values.push_back(iv.upper());
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::size_t m = values.size();
  std::size_t cells = 2 * m + 1;
  profile.counts_.assign(cells, 0);
  profile.masses_.assign(cells, 0.0);

  const bool uniform = family.uniform();
  const double denom = double(family.size());
  for (std::size_t cell = 0; cell < cells; ++cell) {
    int count = 0;
    double mass = 0.0;
    if (cell % 2 == 1) {
      double v = values[cell / 2];
      for (std::size_t k = 0; k < family.size(); ++k) {
        if (family.sets()[k].contains(v)) {
          ++count;
          if (!uniform) mass += family.weights()[k];
        }
      }
    } else {
      std::size_t gap = cell / 2;
      double lo = profile.gap_lower(gap);
      double hi = profile.gap_upper(gap);
      for (std::size_t k = 0; k < family.size(); ++k) {
        const Interval& iv = family.sets()[k];
        // All endpoints are breakpoints, so covering the open gap reduces to
        // spanning both of its bounds; the flags cannot matter inside.
        if (iv.lower() <= lo && iv.upper() >= hi) {
          ++count;
          if (!uniform) mass += family.weights()[k];
        }
      }
    }
    profile.counts_[cell] = count;
    profile.masses_[cell] = uniform ? double(count) / denom : mass;
  }
  return profile;
}

namespace detail {
template <typename CellIncluded>
IntervalUnion stitch_cells(const VoteProfile& profile, CellIncluded included) {
  std::vector<Interval> pieces;
  std::size_t cells = profile.cell_count();
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!included(cell)) continue;
    if (cell % 2 == 1) {
      pieces.push_back(Interval::point(profile.breakpoints()[cell / 2]));
    } else {
      std::size_t gap = cell / 2;
      pieces.push_back(Interval(profile.gap_lower(gap), profile.gap_upper(gap), false, false));
    }
  }
  return normalize(pieces);
}
}  // namespace detail

// The set {s : g(s) > threshold} (or >= when strict is false). Degenerate
// single-point parts are kept, so inclusion relations between rules remain
// exact at endpoints.
inline IntervalUnion superlevel(const VoteProfile& profile, double threshold, bool strict = true) {
  return detail::stitch_cells(profile, [&](std::size_t cell) {
    double g = profile.mass_in_cell(cell);
    return strict ? g > threshold : g >= threshold;
  });
}

// The set {s : #votes(s) > min_votes}; exact integer comparison.
inline IntervalUnion superlevel_count(const VoteProfile& profile, int min_votes) {
  return detail::stitch_cells(
      profile, [&](std::size_t cell) { return profile.count_in_cell(cell) > min_votes; });
}

}  // namespace setvote

#endif  // SETVOTE_PROFILE_HPP
