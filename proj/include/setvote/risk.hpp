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
// Merging label sets that control a bounded monotone loss on a finite label
// space. The implemented loss family is the per-label miscoverage cost
// L(C, y) = L_y 1{y not in C}; the vote thresholds work off per-set per-label
// loss tables, so other bounded monotone losses plug into the same machinery.

#ifndef SETVOTE_RISK_HPP
#define SETVOTE_RISK_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "setvote/random.hpp"

namespace setvote {

// Finite ordered label space with a misclassification cost per label and the
// common loss bound B; 0 <= L_y <= B for every label.
struct LossSpec {
  std::vector<double> per_label_cost;
  double bound = 1.0;

  LossSpec(std::vector<double> costs, double loss_bound)
      : per_label_cost(std::move(costs)), bound(loss_bound) {
    if (per_label_cost.empty()) throw std::invalid_argument("LossSpec: no labels");
    if (!(bound > 0.0) || std::isinf(bound))
      throw std::invalid_argument("LossSpec: bound must be positive and finite");
    for (double c : per_label_cost)
      if (!(c >= 0.0 && c <= bound))
        throw std::invalid_argument("LossSpec: per-label costs must lie in [0, B]");
  }

  std::size_t label_count() const { return per_label_cost.size(); }
};

// K label subsets as membership tables plus a normalized weight vector.
class LabelSetFamily {
 public:
  explicit LabelSetFamily(std::vector<std::vector<bool>> members)
      : members_(std::move(members)), uniform_(true) {
    validate();
    weights_.assign(members_.size(), 1.0 / double(members_.size()));
  }

  LabelSetFamily(std::vector<std::vector<bool>> members, std::vector<double> weights)
      : members_(std::move(members)), weights_(std::move(weights)) {
    validate();
    if (weights_.size() != members_.size())
      throw std::invalid_argument("LabelSetFamily: weight count mismatch");
    double sum = 0.0;
    for (double w : weights_) {
      if (std::isnan(w) || w < 0.0)
        throw std::invalid_argument("LabelSetFamily: weights must be nonnegative");
      sum += w;
    }
    if (!(sum > 0.0) || std::isinf(sum))
      throw std::invalid_argument("LabelSetFamily: weights must have positive finite sum");
    if (sum != 1.0)
      for (double& w : weights_) w /= sum;
    uniform_ = std::all_of(weights_.begin(), weights_.end(),
                           [&](double w) { return w == weights_.front(); });
  }

  std::size_t size() const { return members_.size(); }
  std::size_t label_count() const { return members_.front().size(); }
  bool member(std::size_t set_index, std::size_t label) const {
    return members_[set_index][label];
  }
  const std::vector<double>& weights() const { return weights_; }
  bool uniform() const { return uniform_; }

 private:
  void validate() const {
    if (members_.empty()) throw std::invalid_argument("LabelSetFamily: needs at least one set");
    std::size_t labels = members_.front().size();
    if (labels == 0) throw std::invalid_argument("LabelSetFamily: empty label space");
    for (const auto& row : members_)
      if (row.size() != labels)
        throw std::invalid_argument("LabelSetFamily: ragged membership tables");
  }

  std::vector<std::vector<bool>> members_;
  std::vector<double> weights_;
  bool uniform_ = false;
};

// A merged label set plus the audit trail, including whether any label was
// kept despite appearing in no input set (possible whenever L_y < threshold,
// the conservativeness caveat of loss-based voting).
struct RiskMergeOutcome {
  std::vector<bool> included;
  double threshold = 0.0;
  std::optional<double> randomization_value;
  std::optional<std::uint64_t> seed;
  bool auto_included_any = false;

  std::size_t set_size() const {
    return std::size_t(std::count(included.begin(), included.end(), true));
  }
};

namespace detail {
inline RiskMergeOutcome risk_merge_below(const LabelSetFamily& family, const LossSpec& spec,
                                         double threshold) {
  if (family.label_count() != spec.label_count())
    throw std::invalid_argument("risk merge: label space mismatch");
  RiskMergeOutcome out;
  out.threshold = threshold;
  out.included.assign(spec.label_count(), false);
  for (std::size_t y = 0; y < spec.label_count(); ++y) {
    double loss;
    int misses = 0;
    for (std::size_t k = 0; k < family.size(); ++k)
      if (!family.member(k, y)) ++misses;
    if (family.uniform()) {
      loss = spec.per_label_cost[y] * (double(misses) / double(family.size()));
    } else {
      loss = 0.0;
      for (std::size_t k = 0; k < family.size(); ++k)
        if (!family.member(k, y)) loss += family.weights()[k] * spec.per_label_cost[y];
    }
    if (loss < threshold) {
      out.included[y] = true;
      if (misses == int(family.size())) out.auto_included_any = true;
    }
  }
  return out;
}
}  // namespace detail

// {y : (1/K) sum_k L_y 1{y not in C_k} < B/2}. With L_y identically B this is
// exactly the majority vote on label membership.
inline RiskMergeOutcome risk_merge_majority(const LabelSetFamily& family, const LossSpec& spec) {
  return detail::risk_merge_below(family, spec, spec.bound / 2.0);
}

inline RiskMergeOutcome risk_merge_weighted_at(const LabelSetFamily& family, const LossSpec& spec,
                                               double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("risk_merge_weighted: u must lie in [0,1]");
  RiskMergeOutcome out = detail::risk_merge_below(family, spec, u * spec.bound / 2.0);
  out.randomization_value = u;
  return out;
}

// {y : sum_k w_k L_y 1{y not in C_k} < U B/2}, U ~ Uniform(0,1).
inline RiskMergeOutcome risk_merge_weighted(const LabelSetFamily& family, const LossSpec& spec,
                                            std::uint64_t seed) {
  Rng rng(seed);
  RiskMergeOutcome out = risk_merge_weighted_at(family, spec, rng.uniform01());
  out.seed = seed;
  return out;
}

// One calibration example: the model's per-label scores and the true label.
struct CalibrationExample {
  std::vector<double> scores;
  std::size_t label = 0;
};

struct GammaCalibration {
  double gamma = 1.0;
  bool infeasible = false;  // no gamma <= 1 met the constraint; full set returned
};

// Smallest gamma such that (n/(n+1)) * mean_i L(C_gamma(x_i), y_i) + B/(n+1)
// <= alpha, where C_gamma(x) = {y : score_y >= 1 - gamma}. The loss is
// piecewise constant in gamma, so scanning the thresholds induced by the
// true-label scores gives the exact infimum.
inline GammaCalibration gamma_calibrate(std::span<const CalibrationExample> calibration,
                                        const LossSpec& spec, double alpha) {
  if (calibration.empty()) throw std::invalid_argument("gamma_calibrate: no calibration data");
  if (!(alpha > 0.0 && alpha < spec.bound))
    throw std::invalid_argument("gamma_calibrate: alpha must lie in (0, B)");
  double n = double(calibration.size());
  for (const auto& ex : calibration) {
    if (ex.scores.size() != spec.label_count())
      throw std::invalid_argument("gamma_calibrate: score vector size mismatch");
    if (ex.label >= spec.label_count())
      throw std::invalid_argument("gamma_calibrate: label out of range");
  }

  std::vector<double> candidates{0.0, 1.0};
  for (const auto& ex : calibration) {
    double g = 1.0 - ex.scores[ex.label];
    if (g > 0.0 && g < 1.0) candidates.push_back(g);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  for (double gamma : candidates) {
    double total = 0.0;
    for (const auto& ex : calibration)
      if (ex.scores[ex.label] < 1.0 - gamma) total += spec.per_label_cost[ex.label];
    double lhs = (n / (n + 1.0)) * (total / n) + spec.bound / (n + 1.0);
    if (lhs <= alpha) return GammaCalibration{gamma, false};
  }
  return GammaCalibration{1.0, true};
}

}  // namespace setvote

#endif  // SETVOTE_RISK_HPP
