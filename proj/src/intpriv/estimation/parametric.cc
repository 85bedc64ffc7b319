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

#include "intpriv/estimation/parametric.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

// log(1 / (1 + e^{-z})).
double LogSigmoid(double z) {
  return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LogMass(const Interval& iv, double loc, double scale) {
  if (iv.lo.is_neg_inf() && iv.hi.is_pos_inf()) return 0.0;
  if (iv.lo.is_neg_inf()) return LogSigmoid((iv.hi.value() - loc) / scale);
  if (iv.hi.is_pos_inf()) return LogSigmoid(-(iv.lo.value() - loc) / scale);
  const double a = (iv.lo.value() - loc) / scale;
  const double b = (iv.hi.value() - loc) / scale;
  // Work in the tail away from the origin to keep the difference accurate.
  if (a >= 0) return std::log(Sigmoid(-a) - Sigmoid(-b));
  return std::log(Sigmoid(b) - Sigmoid(a));
}

template <class F>
double GoldenMax(F&& f, double lo, double hi, int iters) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double LogisticLogLikelihood(std::span<const PrivatizedRecord> records, double loc,
                             double scale) {
  double total = 0.0;
  for (const auto& rec : records) {
    if (rec.exact()) {
      const double z = (*rec.exact() - loc) / scale;
      total += -std::abs(z) - 2.0 * std::log1p(std::exp(-std::abs(z))) - std::log(scale);
      continue;
    }
    const auto& parts = rec.chosen_range().parts();
    if (parts.size() == 1) {
      total += LogMass(parts[0], loc, scale);
    } else {
      double m = 0.0;
      for (const auto& iv : parts) m += std::exp(LogMass(iv, loc, scale));
      total += std::log(m);
    }
  }
  return total;
}

absl::StatusOr<LogisticFit> FitLogisticMle(std::span<const PrivatizedRecord> records) {
  if (records.empty()) return InvalidArgument("NoData", "no records");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& rec : records) {
    if (rec.exact()) {
      lo = std::min(lo, *rec.exact());
      hi = std::max(hi, *rec.exact());
    }
    for (double a : rec.anchors()) {
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  }
  if (!(hi > lo)) return InvalidArgument("DegenerateSupport", "records span no interval");
  const double spread = hi - lo;
  const auto ll = [&](double loc, double log_scale) {
    const double v = LogisticLogLikelihood(records, loc, std::exp(log_scale));
    return std::isfinite(v) ? v : -std::numeric_limits<double>::max();
  };
  const auto best_loc = [&](double log_scale) {
    return GoldenMax([&](double m) { return ll(m, log_scale); }, lo, hi, 60);
  };
  double t = GoldenMax([&](double ls) { return ll(best_loc(ls), ls); },
                       std::log(1e-3 * spread), std::log(10.0 * spread), 50);
  double m = best_loc(t);
  double cur = ll(m, t);
  for (int it = 0; it < 20; ++it) {
    const double h = 1e-4 * (1.0 + std::abs(m)), k = 1e-4;
    const double gm = (ll(m + h, t) - ll(m - h, t)) / (2 * h);
    const double gt = (ll(m, t + k) - ll(m, t - k)) / (2 * k);
    const double hmm = (ll(m + h, t) - 2 * cur + ll(m - h, t)) / (h * h);
    const double htt = (ll(m, t + k) - 2 * cur + ll(m, t - k)) / (k * k);
    const double hmt =
        (ll(m + h, t + k) - ll(m + h, t - k) - ll(m - h, t + k) + ll(m - h, t - k)) / (4 * h * k);
    const double det = hmm * htt - hmt * hmt;
    if (!(hmm < 0 && det > 0)) break;  // not locally concave
    const double dm = -(htt * gm - hmt * gt) / det;
    const double dt = -(hmm * gt - hmt * gm) / det;
    double step = 1.0;
    bool moved = false;
    for (int half = 0; half < 10; ++half, step *= 0.5) {
      const double cand = ll(m + step * dm, t + step * dt);
      if (cand > cur) {
        m += step * dm;
        t += step * dt;
        cur = cand;
        moved = true;
        break;
      }
    }
    if (!moved || std::hypot(step * dm, step * dt) < 1e-10) break;
  }
  return LogisticFit{m, std::exp(t), cur};
}

}  // namespace intpriv
