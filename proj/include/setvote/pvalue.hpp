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
// Order-statistic combination of K arbitrarily dependent p-values: the
// scaled k-th order statistic (K/k) p_(k), its doubled-median special case,
// and the randomized variant (K/k) p_(ceil(Uk)) that is never larger. These
// rules are the p-value duals of the voting rules on sets.

#ifndef SETVOTE_PVALUE_HPP
#define SETVOTE_PVALUE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "setvote/numeric.hpp"
#include "setvote/random.hpp"

namespace setvote {

// K observed p-values, validated to lie in [0,1].
class PValueVector {
 public:
  explicit PValueVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("PValueVector: empty");
    for (double p : values_)
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("PValueVector: entries must lie in [0,1]");
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  // k-th smallest, 1-based.
  double order_statistic(int k) const {
    if (k < 1 || std::size_t(k) > values_.size())
      throw std::invalid_argument("PValueVector: order statistic out of range");
    std::vector<double> copy = values_;
    std::nth_element(copy.begin(), copy.begin() + (k - 1), copy.end());
    return copy[std::size_t(k - 1)];
  }

 private:
  std::vector<double> values_;
};

// (K/k) p_(k), capped at one. k = 1 is the Bonferroni correction, k = K the
// maximum; middle k trade the two off.
inline double ruger(const PValueVector& p, int k) {
  double scaled = double(p.size()) / double(k) * p.order_statistic(k);
  return std::min(1.0, scaled);
}

// Twice the lower median of the p-values, capped at one.
inline double ruger_median(const PValueVector& p) {
  int k = (int(p.size()) + 1) / 2;
  return std::min(1.0, 2.0 * p.order_statistic(k));
}

// (K/k) p_(ceil(u k)) for a supplied u in (0,1]; never exceeds ruger(p, k).
inline double ruger_randomized_at(const PValueVector& p, int k, double u) {
  if (k < 1 || std::size_t(k) > p.size())
    throw std::invalid_argument("ruger_randomized: k out of range");
  if (!(u > 0.0 && u <= 1.0))
    throw std::invalid_argument("ruger_randomized: u must lie in (0,1]");
  int idx = int(std::ceil(u * double(k)));
  idx = std::max(1, std::min(idx, k));
  double scaled = double(p.size()) / double(k) * p.order_statistic(idx);
  return std::min(1.0, scaled);
}

// Randomized combination with U drawn uniformly from (0,1]; excluding zero
// keeps the index ceil(Uk) >= 1 and costs nothing in validity.
inline double ruger_randomized(const PValueVector& p, int k, std::uint64_t seed) {
  Rng rng(seed);
  return ruger_randomized_at(p, k, rng.uniform_pos());
}

// Consistency of the set/p-value duality on a finite probe grid: a point
// whose induced sets put it in the majority vote must have its (doubled)
// median p-value clear alpha. `per_point` holds the K p-values observed at
// each probe point.
inline bool duality_check(const std::vector<std::vector<double>>& per_point, double alpha) {
  for (const auto& pvals : per_point) {
    if (pvals.empty()) throw std::invalid_argument("duality_check: empty p-value row");
    int k_total = int(pvals.size());
    int votes = 0;
    for (double p : pvals) {
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("duality_check: p-values must lie in [0,1]");
      if (p > alpha) ++votes;
    }
    bool in_majority_vote = 2 * votes > k_total;
    if (in_majority_vote) {
      double median = lower_median(pvals);
      if (!(median > alpha)) return false;
    }
  }
  return true;
}

}  // namespace setvote

#endif  // SETVOTE_PVALUE_HPP
