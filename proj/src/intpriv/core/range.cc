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

#include "intpriv/core/range.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "intpriv/core/errors.h"

namespace intpriv {

double ExtReal::value() const {
  if (!is_finite()) {
    // Programming error; infinite endpoints never enter arithmetic.
    std::abort();
  }
  return value_;
}

double ExtReal::ToDouble() const {
  switch (kind_) {
    case Kind::kNegInf:
      return -HUGE_VAL;
    case Kind::kPosInf:
      return HUGE_VAL;
    case Kind::kFinite:
      break;
  }
  return value_;
}

std::string ExtReal::ToString() const {
  switch (kind_) {
    case Kind::kNegInf:
      return "-inf";
    case Kind::kPosInf:
      return "+inf";
    case Kind::kFinite:
      break;
  }
  return absl::StrCat(value_);
}

absl::StatusOr<Interval> Interval::Make(ExtReal lo, ExtReal hi) {
  if (lo.is_pos_inf() || hi.is_neg_inf() || !(lo < hi)) {
    return InvalidArgument("InvalidInterval",
                           absl::StrCat("(", lo.ToString(), ", ",
                                        hi.ToString(), "] is empty"));
  }
  return Interval{lo, hi};
}

std::vector<Interval> Range::Normalize(std::vector<Interval> parts) {
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo;
  });
  std::vector<Interval> out;
  out.reserve(parts.size());
  for (const Interval& iv : parts) {
    if (!out.empty() && !(out.back().hi < iv.lo)) {
      // Overlapping or touching: (a, b] U (b, c] = (a, c].
      if (out.back().hi < iv.hi) out.back().hi = iv.hi;
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

absl::StatusOr<Range> Range::Make(std::vector<Interval> parts) {
  for (const Interval& iv : parts) {
    if (iv.lo.is_pos_inf() || iv.hi.is_neg_inf() || !(iv.lo < iv.hi)) {
      return InvalidArgument(
          "InvalidRange", absl::StrCat("part (", iv.lo.ToString(), ", ",
                                       iv.hi.ToString(), "] is empty"));
    }
  }
  return Range(Normalize(std::move(parts)));
}

Range Range::AtMost(double hi) {
  return Range({Interval{ExtReal::NegInf(), ExtReal(hi)}});
}

Range Range::Above(double lo) {
  return Range({Interval{ExtReal(lo), ExtReal::PosInf()}});
}

Range Range::Between(double lo, double hi) {
  assert(lo < hi);
  return Range({Interval{ExtReal(lo), ExtReal(hi)}});
}

bool Range::is_full() const {
  return parts_.size() == 1 && parts_[0].lo.is_neg_inf() &&
         parts_[0].hi.is_pos_inf();
}

bool Range::Contains(double y) const {
  // Parts are sorted; the first part whose hi >= y is the only candidate.
  auto it = std::lower_bound(parts_.begin(), parts_.end(), y,
                             [](const Interval& iv, double v) { return iv.hi < v; });
  return it != parts_.end() && it->Contains(y);
}

bool Range::IsSubsetOf(const Range& other) const {
  return Intersect(other) == *this;
}

Range Range::Intersect(const Range& other) const {
  std::vector<Interval> out;
  size_t i = 0, j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    const Interval& a = parts_[i];
    const Interval& b = other.parts_[j];
    const ExtReal lo = std::max(a.lo, b.lo, [](const ExtReal& x, const ExtReal& y) {
      return x < y;
    });
    const ExtReal hi = std::min(a.hi, b.hi, [](const ExtReal& x, const ExtReal& y) {
      return x < y;
    });
    if (lo < hi) out.push_back({lo, hi});
    if (a.hi < b.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return Range(Normalize(std::move(out)));
}

Range Range::Union(const Range& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return Range(Normalize(std::move(all)));
}

std::string Range::ToString() const {
  if (parts_.empty()) return "{}";
  return absl::StrJoin(parts_, " U ", [](std::string* out, const Interval& iv) {
    absl::StrAppend(out, "(", iv.lo.ToString(), ", ", iv.hi.ToString(),
                    iv.hi.is_pos_inf() ? ")" : "]");
  });
}

Range Intersect(const Range& a, const Range& b) { return a.Intersect(b); }

namespace {

absl::Status CheckIncreasing(std::span<const double> anchors) {
  for (size_t i = 0; i < anchors.size(); ++i) {
    if (!std::isfinite(anchors[i])) {
      return InvalidArgument("InvalidAnchors", "anchor is not finite");
    }
    if (i > 0 && !(anchors[i - 1] < anchors[i])) {
      return InvalidArgument("InvalidAnchors",
                             "anchors must be strictly increasing");
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Partition> Partition::Canonical(std::span<const double> anchors) {
  INTPRIV_RETURN_IF_ERROR(CheckIncreasing(anchors));
  std::vector<Range> ranges;
  ranges.reserve(anchors.size() + 1);
  ExtReal lo = ExtReal::NegInf();
  for (double a : anchors) {
    ranges.push_back(Range::Of({lo, ExtReal(a)}));
    lo = ExtReal(a);
  }
  ranges.push_back(Range::Of({lo, ExtReal::PosInf()}));
  return Partition(std::move(ranges), Topology::kCanonical);
}

absl::StatusOr<Partition> Partition::Ring(std::span<const double> anchors) {
  if (anchors.size() < 2) {
    return InvalidArgument("InvalidAnchors", "ring topology needs q >= 2 anchors");
  }
  INTPRIV_RETURN_IF_ERROR(CheckIncreasing(anchors));
  std::vector<Range> ranges;
  ranges.reserve(anchors.size());
  ranges.push_back(Range::AtMost(anchors.front()).Union(Range::Above(anchors.back())));
  for (size_t i = 1; i < anchors.size(); ++i) {
    ranges.push_back(Range::Between(anchors[i - 1], anchors[i]));
  }
  return Partition(std::move(ranges), Topology::kRing);
}

absl::StatusOr<Partition> Partition::FromRanges(std::vector<Range> ranges) {
  std::vector<Interval> all;
  for (const Range& r : ranges) {
    if (r.empty()) return InvalidArgument("InvalidPartition", "empty range");
    all.insert(all.end(), r.parts().begin(), r.parts().end());
  }
  std::sort(all.begin(), all.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  if (all.empty() || !all.front().lo.is_neg_inf() || !all.back().hi.is_pos_inf()) {
    return InvalidArgument("InvalidPartition", "ranges do not cover the line");
  }
  for (size_t i = 1; i < all.size(); ++i) {
    if (!(all[i - 1].hi == all[i].lo)) {
      return InvalidArgument("InvalidPartition",
                             all[i - 1].hi < all[i].lo ? "gap between ranges"
                                                       : "overlapping ranges");
    }
  }
  return Partition(std::move(ranges), Topology::kGeneral);
}

size_t Partition::Locate(double y) const {
  if (topology_ == Topology::kCanonical) {
    // Range i is (a_{i-1}, a_i]; binary search on the upper endpoints.
    auto it = std::lower_bound(ranges_.begin(), ranges_.end(), y,
                               [](const Range& r, double v) {
                                 return r.parts().back().hi < v;
                               });
    return static_cast<size_t>(it - ranges_.begin()) + 1;
  }
  for (size_t i = 0; i < ranges_.size(); ++i) {
    if (ranges_[i].Contains(y)) return i + 1;
  }
  // Unreachable for a valid partition.
  std::abort();
}

std::vector<double> Partition::Breakpoints() const {
  std::vector<double> out;
  for (const Range& r : ranges_) {
    for (const Interval& iv : r.parts()) {
      if (iv.lo.is_finite()) out.push_back(iv.lo.value());
      if (iv.hi.is_finite()) out.push_back(iv.hi.value());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace intpriv
