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

#include "intpriv/estimation/turnbull.h"

#include <algorithm>
#include <utility>

#include "intpriv/core/errors.h"

namespace intpriv {

absl::StatusOr<TurnbullSupport> BuildTurnbullSupport(std::span<const PrivatizedRecord> records) {
  if (records.empty()) return InvalidArgument("NoData", "no records");
  std::vector<double> cuts;
  std::vector<double> points;
  for (const auto& rec : records) {
    if (rec.exact()) {
      points.push_back(*rec.exact());
      continue;
    }
    for (const Interval& iv : rec.chosen_range().parts()) {
      if (iv.lo.is_finite()) cuts.push_back(iv.lo.value());
      if (iv.hi.is_finite()) cuts.push_back(iv.hi.value());
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  cuts.insert(cuts.end(), points.begin(), points.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const size_t k = cuts.size();

  // Candidate atoms gap by gap: gap g is (cut[g-1], cut[g]] with cut[-1] =
  // -inf and cut[k] = +inf, followed by the point atom at cut[g] if that
  // value was disclosed.
  std::vector<Atom> cand;
  std::vector<uint32_t> gap_begin(k + 1), gap_end(k + 1);
  std::vector<uint32_t> point_index(k, UINT32_MAX);
  for (size_t g = 0; g <= k; ++g) {
    const ExtReal lo = g == 0 ? ExtReal::NegInf() : ExtReal(cuts[g - 1]);
    const ExtReal hi = g == k ? ExtReal::PosInf() : ExtReal(cuts[g]);
    const bool has_point = g < k && std::binary_search(points.begin(), points.end(), cuts[g]);
    gap_begin[g] = static_cast<uint32_t>(cand.size());
    Atom a{lo, hi, false};
    a.hi_open = has_point;
    cand.push_back(a);
    if (has_point) {
      point_index[g] = static_cast<uint32_t>(cand.size());
      cand.push_back(Atom{hi, hi, true});
    }
    gap_end[g] = static_cast<uint32_t>(cand.size());
  }
  const auto cut_pos = [&](double x) {
    return static_cast<size_t>(std::lower_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
  };

  // Spans over candidates, then the coverage count of each candidate.
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> spans;
  size_t uninformative = 0;
  for (const auto& rec : records) {
    std::vector<std::pair<uint32_t, uint32_t>> s;
    if (rec.exact()) {
      const uint32_t p = point_index[cut_pos(*rec.exact())];
      s.push_back({p, p + 1});
    } else {
      if (rec.chosen_range().is_full()) ++uninformative;
      for (const Interval& iv : rec.chosen_range().parts()) {
        // (cut[s], cut[e]] spans gaps s+1 .. e.
        const size_t first_gap = iv.lo.is_finite() ? cut_pos(iv.lo.value()) + 1 : 0;
        const size_t last_gap = iv.hi.is_finite() ? cut_pos(iv.hi.value()) : k;
        s.push_back({gap_begin[first_gap], gap_end[last_gap]});
      }
    }
    spans.push_back(std::move(s));
  }
  std::vector<int> depth(cand.size() + 1, 0);
  for (const auto& s : spans) {
    for (const auto& [b, e] : s) {
      ++depth[b];
      --depth[e];
    }
  }
  // An interval cell whose left cut opens no observed part, or whose right
  // cut closes none, is covered by a subset of the records covering its
  // neighbour; its mass can only move there. Open cells sit under a
  // disclosed point and are dominated by it.
  std::vector<char> opens(k, 0), closes(k, 0);
  for (const auto& rec : records) {
    if (rec.exact()) continue;
    for (const Interval& iv : rec.chosen_range().parts()) {
      if (iv.lo.is_finite()) opens[cut_pos(iv.lo.value())] = 1;
      if (iv.hi.is_finite()) closes[cut_pos(iv.hi.value())] = 1;
    }
  }
  const auto innermost = [&](const Atom& a) {
    if (a.point) return true;
    if (a.hi_open) return false;
    const bool left = !a.lo.is_finite() || opens[cut_pos(a.lo.value())];
    const bool right = !a.hi.is_finite() || closes[cut_pos(a.hi.value())];
    return left && right;
  };
  std::vector<uint32_t> remap(cand.size() + 1, 0);
  TurnbullSupport out;
  int run = 0;
  for (size_t a = 0; a < cand.size(); ++a) {
    remap[a] = static_cast<uint32_t>(out.atoms.size());
    run += depth[a];
    if (run > 0 && innermost(cand[a])) out.atoms.push_back(cand[a]);
  }
  remap[cand.size()] = static_cast<uint32_t>(out.atoms.size());
  out.incidence.num_atoms = out.atoms.size();
  for (auto& s : spans) {
    for (auto& [b, e] : s) {
      b = remap[b];
      e = remap[e];
    }
    if (std::all_of(s.begin(), s.end(), [](const auto& p) { return p.first == p.second; })) {
      return absl::InternalError("record lost every atom");
    }
    out.incidence.AddRecord(s);
  }
  out.uninformative = uninformative;
  return out;
}

}  // namespace intpriv
