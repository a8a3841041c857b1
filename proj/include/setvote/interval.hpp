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
// One-dimensional intervals with open/closed endpoint flags, and normalized
// finite unions of them. Every operation is exact: membership, intersection
// and union normalization are decided by endpoint comparisons only, with no
// tolerances, so set-level identities (idempotence, inclusion, duality with
// pointwise evaluation) hold bit-for-bit.

#ifndef SETVOTE_INTERVAL_HPP
#define SETVOTE_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "setvote/numeric.hpp"

namespace setvote {

// A nonempty interval of the real line. Endpoints may be -inf/+inf, in which
// case the corresponding side is necessarily open. A degenerate interval
// (lower == upper) must be closed on both sides: it is the single point.
// Constructions that would denote the empty set are rejected.
class Interval {
 public:
  Interval(double lower, double upper, bool lower_closed = true, bool upper_closed = true)
      : lower_(lower), upper_(upper), lower_closed_(lower_closed), upper_closed_(upper_closed) {
    if (std::isnan(lower_) || std::isnan(upper_))
      throw std::invalid_argument("Interval: NaN endpoint");
    if (lower_ > upper_) throw std::invalid_argument("Interval: lower > upper");
    if (std::isinf(lower_)) lower_closed_ = false;  // infinite endpoints are open
    if (std::isinf(upper_)) upper_closed_ = false;
    if (lower_ == upper_ && !(lower_closed_ && upper_closed_))
      throw std::invalid_argument("Interval: degenerate interval must be closed (empty otherwise)");
  }

  static Interval point(double v) { return Interval(v, v, true, true); }
  static Interval whole_line() { return Interval(-kInf, kInf, false, false); }
  static Interval centered(double mid, double half_width) {
    return Interval(mid - half_width, mid + half_width, true, true);
  }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool lower_closed() const { return lower_closed_; }
  bool upper_closed() const { return upper_closed_; }

  bool contains(double s) const {
    bool above = lower_ < s || (lower_ == s && lower_closed_);
    bool below = s < upper_ || (s == upper_ && upper_closed_);
    return above && below;
  }

  bool is_point() const { return lower_ == upper_; }
  bool bounded() const { return !std::isinf(lower_) && !std::isinf(upper_); }
  double width() const { return upper_ - lower_; }
  double midpoint() const {
    if (!bounded()) throw std::invalid_argument("Interval::midpoint: unbounded interval");
    return 0.5 * (lower_ + upper_);
  }

  // a contains b as a set.
  bool contains(const Interval& b) const {
    bool lo_ok = lower_ < b.lower_ || (lower_ == b.lower_ && (lower_closed_ || !b.lower_closed_));
    bool hi_ok = b.upper_ < upper_ || (b.upper_ == upper_ && (upper_closed_ || !b.upper_closed_));
    return lo_ok && hi_ok;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lower_, upper_;
  bool lower_closed_, upper_closed_;
};

// Set intersection of two intervals; nullopt when empty.
inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  double lo;
  bool lo_closed;
  if (a.lower() > b.lower() || (a.lower() == b.lower() && !a.lower_closed())) {
    lo = a.lower();
    lo_closed = a.lower_closed() && (a.lower() != b.lower() || b.lower_closed());
  } else {
    lo = b.lower();
    lo_closed = b.lower_closed() && (a.lower() != b.lower() || a.lower_closed());
  }
  double hi;
  bool hi_closed;
  if (a.upper() < b.upper() || (a.upper() == b.upper() && !a.upper_closed())) {
    hi = a.upper();
    hi_closed = a.upper_closed() && (a.upper() != b.upper() || b.upper_closed());
  } else {
    hi = b.upper();
    hi_closed = b.upper_closed() && (a.upper() != b.upper() || a.upper_closed());
  }
  if (lo > hi || (lo == hi && !(lo_closed && hi_closed))) return std::nullopt;
  return Interval(lo, hi, lo_closed, hi_closed);
}

namespace detail {
// Two abutting intervals a (left) and b (right) with a.upper == b.lower can
// be glued iff at least one of the touching endpoints is closed.
inline bool mergeable(const Interval& a, const Interval& b) {
  if (a.upper() > b.lower()) return true;
  if (a.upper() < b.lower()) return false;
  return a.upper_closed() || b.lower_closed();
}
}  // namespace detail

// A finite union of pairwise disjoint, non-adjacent intervals, stored in
// increasing order. The canonical form makes equality comparisons meaningful.
// May be empty.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(const Interval& iv) : parts_{iv} {}

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t part_count() const { return parts_.size(); }

  bool contains(double s) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), s,
                               [](double v, const Interval& p) { return v < p.lower(); });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(s);
  }

  // Lebesgue measure; +inf as soon as any part is unbounded.
  double measure() const {
    double total = 0.0;
    for (const Interval& p : parts_) total += p.width();
    return total;
  }

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

  // Internal: parts must already be sorted, disjoint and non-adjacent.
  static IntervalUnion from_normalized(std::vector<Interval> parts) {
    IntervalUnion u;
    u.parts_ = std::move(parts);
    return u;
  }

 private:
  std::vector<Interval> parts_;
};

// Canonical union of an arbitrary collection of intervals: sorts by lower
// endpoint (closed endpoints first on ties) and glues every overlapping or
// touching pair. Pointwise membership is preserved exactly; open endpoints
// meeting at a value leave that single point uncovered.
inline IntervalUnion normalize(std::span<const Interval> parts) {
  if (parts.empty()) return IntervalUnion{};
  std::vector<Interval> sorted(parts.begin(), parts.end());
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) {
    if (a.lower() != b.lower()) return a.lower() < b.lower();
    if (a.lower_closed() != b.lower_closed()) return a.lower_closed();
    if (a.upper() != b.upper()) return a.upper() > b.upper();
    return a.upper_closed() && !b.upper_closed();
  });
  std::vector<Interval> out;
  out.push_back(sorted.front());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    Interval& last = out.back();
    const Interval& next = sorted[i];
    if (detail::mergeable(last, next)) {
      if (next.upper() > last.upper() ||
          (next.upper() == last.upper() && next.upper_closed() && !last.upper_closed())) {
        last = Interval(last.lower(), next.upper(), last.lower_closed(), next.upper_closed());
      }
    } else {
      out.push_back(next);
    }
  }
  return IntervalUnion::from_normalized(std::move(out));
}

inline IntervalUnion normalize(const std::vector<Interval>& parts) {
  return normalize(std::span<const Interval>(parts));
}

inline IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.parts().size() && j < b.parts().size()) {
    const Interval& pa = a.parts()[i];
    const Interval& pb = b.parts()[j];
    if (auto piece = intersect(pa, pb)) out.push_back(*piece);
    // Advance whichever part ends first; on equal uppers the open one is the
    // tighter and can be retired first without losing overlap.
    if (pa.upper() < pb.upper() || (pa.upper() == pb.upper() && !pa.upper_closed())) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalUnion::from_normalized(std::move(out));
}

inline bool subset_of(const IntervalUnion& a, const IntervalUnion& b) {
  return intersect(a, b) == a;
}

}  // namespace setvote

#endif  // SETVOTE_INTERVAL_HPP
