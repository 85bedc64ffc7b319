// Copyright 2026 The Interval Privacy Authors.
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

// Extended-real intervals and finite unions of them. Every interval is
// half-open, (lo, hi], so a value equal to an anchor always falls in the
// range to its left.

#ifndef INTPRIV_CORE_RANGE_H_
#define INTPRIV_CORE_RANGE_H_

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace intpriv {

// A real number or one of the two infinities. Infinite values only take part
// in comparisons; asking for the value of an infinite ExtReal is a bug.
class ExtReal {
 public:
  enum class Kind : int { kNegInf = 0, kFinite = 1, kPosInf = 2 };

  constexpr ExtReal() = default;
  constexpr explicit ExtReal(double v) : kind_(Kind::kFinite), value_(v) {}

  static constexpr ExtReal NegInf() { return ExtReal(Kind::kNegInf); }
  static constexpr ExtReal PosInf() { return ExtReal(Kind::kPosInf); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::kNegInf; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::kPosInf; }

  // Requires is_finite().
  double value() const;

  // Finite value, or +/-HUGE_VAL for the infinities. Only for plotting and
  // for APIs that take IEEE doubles at the boundary.
  double ToDouble() const;

  friend constexpr std::partial_ordering operator<=>(const ExtReal& a,
                                                     const ExtReal& b) {
    if (a.kind_ != b.kind_) {
      return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    }
    if (!a.is_finite()) return std::partial_ordering::equivalent;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    return (a <=> b) == 0;
  }
  friend constexpr std::partial_ordering operator<=>(const ExtReal& a,
                                                     double b) {
    return a <=> ExtReal(b);
  }
  friend constexpr bool operator==(const ExtReal& a, double b) {
    return (a <=> ExtReal(b)) == 0;
  }

  std::string ToString() const;

 private:
  constexpr explicit ExtReal(Kind k) : kind_(k) {}

  Kind kind_ = Kind::kFinite;
  double value_ = 0.0;
};

// Half-open interval (lo, hi] with lo < hi.
struct Interval {
  ExtReal lo;
  ExtReal hi;

  static absl::StatusOr<Interval> Make(ExtReal lo, ExtReal hi);
  static Interval Full() { return {ExtReal::NegInf(), ExtReal::PosInf()}; }

  bool Contains(double y) const { return lo < y && hi >= y; }
  bool operator==(const Interval&) const = default;
};

// Finite union of disjoint intervals, kept sorted with no two parts touching.
// The empty range is the identity of union and never comes out of a
// mechanism.
class Range {
 public:
  Range() = default;

  // Normalizes: drops nothing-intervals, sorts, merges overlapping and
  // touching parts. Fails on an interval with lo >= hi.
  static absl::StatusOr<Range> Make(std::vector<Interval> parts);
  static Range Full() { return Range({Interval::Full()}); }
  static Range Empty() { return Range(); }
  static Range Of(Interval iv) { return Range({iv}); }
  // (-inf, hi]
  static Range AtMost(double hi);
  // (lo, +inf)
  static Range Above(double lo);
  // (lo, hi]; requires lo < hi.
  static Range Between(double lo, double hi);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool is_full() const;

  bool Contains(double y) const;
  // True when every point of this range is in `other`.
  bool IsSubsetOf(const Range& other) const;

  Range Intersect(const Range& other) const;
  Range Union(const Range& other) const;

  bool operator==(const Range&) const = default;
  std::string ToString() const;

 private:
  explicit Range(std::vector<Interval> canonical) : parts_(std::move(canonical)) {}
  static std::vector<Interval> Normalize(std::vector<Interval> parts);

  std::vector<Interval> parts_;
};

Range Intersect(const Range& a, const Range& b);

enum class Topology { kCanonical, kRing, kGeneral };

// A partition of the real line into ranges, indexed 1..m.
class Partition {
 public:
  Partition() = default;

  // (-inf, a1], (a1, a2], ..., (a_k, +inf) from strictly increasing anchors.
  static absl::StatusOr<Partition> Canonical(std::span<const double> anchors);
  // Wrap range (-inf, t1] U (tq, +inf), then (t_{i-1}, t_i] for i = 2..q.
  // Requires q >= 2 strictly increasing anchors.
  static absl::StatusOr<Partition> Ring(std::span<const double> anchors);
  // Arbitrary ranges; validates disjointness and that the union is the line.
  static absl::StatusOr<Partition> FromRanges(std::vector<Range> ranges);

  size_t size() const { return ranges_.size(); }
  // 1-based.
  const Range& range(size_t index) const { return ranges_.at(index - 1); }
  const std::vector<Range>& ranges() const { return ranges_; }
  Topology topology() const { return topology_; }

  // 1-based index of the range containing y; total by construction.
  size_t Locate(double y) const;

  // Finite endpoints of all ranges, sorted and de-duplicated.
  std::vector<double> Breakpoints() const;

  bool operator==(const Partition&) const = default;

 private:
  Partition(std::vector<Range> ranges, Topology t)
      : ranges_(std::move(ranges)), topology_(t) {}

  std::vector<Range> ranges_;
  Topology topology_ = Topology::kGeneral;
};

}  // namespace intpriv

#endif  // INTPRIV_CORE_RANGE_H_
