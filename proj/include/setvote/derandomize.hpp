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
// Derandomization of split-based procedures: medians of exchangeable point
// estimators (median-of-means and its median-of-medians), convex-hull bucket
// intervals, and a stabilization tracker for adaptive stopping. Medians are
// always the lower median (the ceil(k/2)-th order statistic), so the returned
// value is an element of the input for even counts too.

#ifndef SETVOTE_DERANDOMIZE_HPP
#define SETVOTE_DERANDOMIZE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "setvote/interval.hpp"
#include "setvote/numeric.hpp"
#include "setvote/random.hpp"

namespace setvote {

// Incremental lower-median: a max-heap of the lower half (holding ceil(k/2)
// elements) against a min-heap of the upper half; O(log k) per push.
class RunningMedian {
 public:
  void push(double v) {
    if (low_.empty() || v <= low_.top()) {
      low_.push(v);
    } else {
      high_.push(v);
    }
    // Rebalance so that low_ holds exactly ceil(k/2) elements.
    if (low_.size() > high_.size() + 1) {
      high_.push(low_.top());
      low_.pop();
    } else if (high_.size() > low_.size()) {
      low_.push(high_.top());
      high_.pop();
    }
  }

  std::size_t size() const { return low_.size() + high_.size(); }

  double median() const {
    if (low_.empty()) throw std::invalid_argument("RunningMedian: empty");
    return low_.top();
  }

 private:
  std::priority_queue<double> low_;
  std::priority_queue<double, std::vector<double>, std::greater<double>> high_;
};

// Element k (0-based) is the lower median of the first k+1 values.
inline std::vector<double> running_median(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("running_median: empty input");
  RunningMedian rm;
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    rm.push(v);
    out.push_back(rm.median());
  }
  return out;
}

// Median of K exchangeable point estimates (e.g. median-of-means replicates);
// the derandomized estimator.
inline double momom(std::span<const double> estimates) {
  if (estimates.empty()) throw std::invalid_argument("momom: empty input");
  return lower_median(std::vector<double>(estimates.begin(), estimates.end()));
}

// Median of means over a pre-ordered sample split into `buckets` contiguous
// blocks; the first (n mod buckets) blocks receive one extra point.
inline double mom_partitioned(std::span<const double> data_in_order, int buckets) {
  int n = int(data_in_order.size());
  if (buckets < 1 || buckets > n)
    throw std::invalid_argument("mom: bucket count must lie in [1, n]");
  int base = n / buckets;
  int extra = n % buckets;
  std::vector<double> means;
  means.reserve(std::size_t(buckets));
  std::size_t pos = 0;
  for (int b = 0; b < buckets; ++b) {
    std::size_t len = std::size_t(base + (b < extra ? 1 : 0));
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) sum += data_in_order[pos + i];
    means.push_back(sum / double(len));
    pos += len;
  }
  return lower_median(std::move(means));
}

// Median of means with a random equipartition drawn from `rng`.
inline double mom(std::span<const double> data, int buckets, Rng& rng) {
  std::vector<double> shuffled(data.begin(), data.end());
  rng.shuffle(std::span<double>(shuffled));
  return mom_partitioned(shuffled, buckets);
}

inline double mom(std::span<const double> data, int buckets, std::uint64_t seed) {
  Rng rng(seed);
  return mom(data, buckets, rng);
}

// Number of data splits needed for a convex-hull interval at miscoverage
// alpha from median-unbiased bucket estimators: smallest b with 2^(1-b) <= alpha.
inline int hulc_split_count(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("hulc_split_count: alpha must lie in (0,1)");
  int b = 1;
  double tail = 1.0;  // 2^(1-b)
  while (tail > alpha) {
    ++b;
    tail /= 2.0;
    if (b > 4096) throw std::invalid_argument("hulc_split_count: alpha too small");
  }
  return b;
}

using BucketEstimator = std::function<double(std::span<const double>, Rng&)>;

// Convex hull of bucket-wise estimates over a random split into
// ceil(log2(2/alpha)) buckets. For median-unbiased estimators the interval
// has miscoverage at most 2^(1-B) <= alpha.
inline Interval hulc_interval(std::span<const double> data, double alpha, Rng& rng,
                              const BucketEstimator& estimator) {
  int b2 = hulc_split_count(alpha);
  int n = int(data.size());
  if (n < b2) throw std::invalid_argument("hulc_interval: fewer data points than buckets");
  std::vector<double> shuffled(data.begin(), data.end());
  rng.shuffle(std::span<double>(shuffled));
  int base = n / b2;
  int extra = n % b2;
  double lo = kInf, hi = -kInf;
  std::size_t pos = 0;
  for (int b = 0; b < b2; ++b) {
    std::size_t len = std::size_t(base + (b < extra ? 1 : 0));
    double est = estimator(std::span<const double>(shuffled).subspan(pos, len), rng);
    lo = std::min(lo, est);
    hi = std::max(hi, est);
    pos += len;
  }
  return Interval(lo, hi, true, true);
}

inline Interval hulc_interval(std::span<const double> data, double alpha, std::uint64_t seed,
                              const BucketEstimator& estimator) {
  Rng rng(seed);
  return hulc_interval(data, alpha, rng, estimator);
}

// K exchangeable point estimates plus the half-width of their shared
// concentration bound, when known; intervals() rebuilds the implied
// confidence intervals.
struct EstimatorBatch {
  std::vector<double> values;
  std::optional<double> half_width;

  std::vector<Interval> intervals() const {
    if (!half_width) throw std::invalid_argument("EstimatorBatch: no half-width recorded");
    std::vector<Interval> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(Interval::centered(v, *half_width));
    return out;
  }
};

enum class TrackDecision { keep_going, stop };

// Watches successive values of a running estimate and reports stop once
// `patience` consecutive jumps |v_t - v_{t-1}| fall below `tolerance`.
class StabilizationTracker {
 public:
  StabilizationTracker(double tolerance, int patience)
      : tolerance_(tolerance), patience_(patience) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("StabilizationTracker: tolerance <= 0");
    if (patience < 1) throw std::invalid_argument("StabilizationTracker: patience < 1");
  }

  TrackDecision track(double value) {
    if (last_) {
      double delta = std::fabs(value - *last_);
      deltas_.push_back(delta);
      quiet_run_ = delta < tolerance_ ? quiet_run_ + 1 : 0;
    }
    last_ = value;
    return quiet_run_ >= patience_ ? TrackDecision::stop : TrackDecision::keep_going;
  }

  const std::vector<double>& deltas() const { return deltas_; }

 private:
  double tolerance_;
  int patience_;
  std::optional<double> last_;
  std::vector<double> deltas_;
  int quiet_run_ = 0;
};

}  // namespace setvote

#endif  // SETVOTE_DERANDOMIZE_HPP
