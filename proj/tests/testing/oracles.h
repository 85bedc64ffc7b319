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

// Independent numerical oracles used by the tests. Nothing here calls into
// the library's closed forms: densities are written out directly and
// integrals are taken by composite Gauss-Legendre in x-space.

#ifndef INTPRIV_TESTING_ORACLES_H_
#define INTPRIV_TESTING_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace intpriv::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double LogisticDensity(double x, double scale) {
  const double e = std::exp(-std::abs(x) / scale);
  return e / (scale * (1.0 + e) * (1.0 + e));
}

inline double GaussianDensity(double x, double sd) {
  const double z = x / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
}

inline double LogisticCdf(double x, double scale) { return 1.0 / (1.0 + std::exp(-x / scale)); }

inline double GaussianCdf(double x, double sd) {
  return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0)));
}

// Composite 20-point Gauss-Legendre on [a, b] with `panels` panels.
inline double Integrate(const std::function<double(double)>& f, double a,
                        double b, int panels = 2000) {
  if (!(b > a)) return 0.0;
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h;
    total += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, lo + h);
  }
  return total;
}

// Moments of a density restricted to (a, b]; infinite ends are truncated
// `reach` scales past the finite end (or around 0 for the full line).
struct TruncatedMoments {
  double mass;
  double mean;
  double second;
};

inline TruncatedMoments Moments(const std::function<double(double)>& density,
                                double a, double b, double scale,
                                double reach = 45.0) {
  double lo = a, hi = b;
  if (std::isinf(lo)) lo = (std::isinf(hi) ? 0.0 : hi) - reach * scale;
  if (std::isinf(hi)) hi = (std::isinf(a) ? 0.0 : lo) + reach * scale;
  if (std::isinf(a) && std::isinf(b)) hi = reach * scale;
  const double m0 = Integrate(density, lo, hi);
  const double m1 = Integrate([&](double x) { return x * density(x); }, lo, hi);
  const double m2 = Integrate([&](double x) { return x * x * density(x); }, lo, hi);
  return {m0, m1 / m0, m2 / m0};
}

// G(s) = integral_{-inf}^{s} x f(x) dx.
inline double PartialMeanOracle(const std::function<double(double)>& density,
                                double s, double scale) {
  return Integrate([&](double x) { return x * density(x); }, s - 60.0 * scale, s);
}

// Least-squares isotonic (nondecreasing) fit of y by pool-adjacent-violators.
// For current-status data sorted by anchor, this is the exact NPMLE of the
// CDF at the anchors.
inline std::vector<double> IsotonicFit(const std::vector<double>& y) {
  std::vector<double> level, weight;
  std::vector<size_t> len;
  for (double v : y) {
    level.push_back(v);
    weight.push_back(1.0);
    len.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      const size_t k = level.size() - 1;
      const double w = weight[k - 1] + weight[k];
      level[k - 1] = (level[k - 1] * weight[k - 1] + level[k] * weight[k]) / w;
      weight[k - 1] = w;
      len[k - 1] += len[k];
      level.pop_back();
      weight.pop_back();
      len.pop_back();
    }
  }
  std::vector<double> out;
  for (size_t b = 0; b < level.size(); ++b) out.insert(out.end(), len[b], level[b]);
  return out;
}

// Grid maximizer of sum_r log(sum of masses over r's atoms) on the simplex
// with step 1e-3: a full pass at step 1e-2, then a 1e-3 pass around the
// best coarse point (the log-likelihood is concave in the masses).
// member[r][a] says whether record r covers atom a. Meant for <= 4 atoms.
inline std::vector<double> BruteForceNpmle(const std::vector<std::vector<char>>& member) {
  const size_t k = member.empty() ? 0 : member.front().size();
  const auto ll = [&](const std::vector<double>& p) {
    double t = 0;
    for (const auto& m : member) {
      double d = 0;
      for (size_t a = 0; a < k; ++a) d += m[a] ? p[a] : 0.0;
      if (d <= 0) return -kInf;
      t += std::log(d);
    }
    return t;
  };
  std::vector<double> best(k, 0.0);
  double best_ll = -kInf;
  const auto search = [&](const std::vector<int>& center, int radius, int units) {
    std::vector<int> idx(k - 1);
    std::vector<double> p(k);
    std::function<void(size_t, int)> rec = [&](size_t d, int used) {
      if (d == k - 1) {
        if (used > units) return;
        for (size_t a = 0; a + 1 < k; ++a) p[a] = idx[a] / static_cast<double>(units);
        p[k - 1] = (units - used) / static_cast<double>(units);
        const double v = ll(p);
        if (v > best_ll) {
          best_ll = v;
          best = p;
        }
        return;
      }
      const int lo = std::max(0, center[d] - radius);
      const int hi = std::min(units, center[d] + radius);
      for (int i = lo; i <= hi && used + i <= units; ++i) {
        idx[d] = i;
        rec(d + 1, used + i);
      }
    };
    rec(0, 0);
  };
  search(std::vector<int>(k, 0), 100, 100);
  std::vector<int> center(k);
  for (size_t a = 0; a < k; ++a) center[a] = static_cast<int>(std::lround(best[a] * 1000));
  search(center, 15, 1000);
  return best;
}

}  // namespace intpriv::testing

#endif  // INTPRIV_TESTING_ORACLES_H_
