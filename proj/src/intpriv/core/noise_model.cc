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

#include "intpriv/core/noise_model.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "absl/strings/str_cat.h"
#include "intpriv/core/distribution.h"
#include "intpriv/core/errors.h"

namespace intpriv {

namespace {

constexpr double kPi = 3.14159265358979323846;

// log(1 + e^x) without overflow.
double Softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// e^{-z} * log(1 + e^{z}).
double ScaledSoftplus(double z) {
  if (z < 0) {
    const double t = std::exp(z);
    return t == 0.0 ? 1.0 : std::log1p(t) / t;
  }
  return std::exp(-z) * (z + std::log1p(std::exp(-z)));
}

double StdLogisticCdf(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Binary entropy of the standard logistic CDF at z, in the stable form
// F * softplus(-z) + (1 - F) * softplus(z).
double StdLogisticEntropy(double z) {
  const double f = StdLogisticCdf(z);
  const double g = StdLogisticCdf(-z);
  return f * Softplus(-z) + g * Softplus(z);
}

ExtReal Scaled(const ExtReal& x, double scale) {
  if (!x.is_finite()) return x;
  return ExtReal(x.value() / scale);
}

}  // namespace

absl::StatusOr<NoiseModel> NoiseModel::Make(Kind kind, double scale) {
  if (!std::isfinite(scale) || !(scale > 0.0)) {
    return InvalidArgument("InvalidNoise", "noise scale must be positive");
  }
  return NoiseModel(kind, scale);
}

double NoiseModel::Variance() const {
  if (kind_ == Kind::kGaussian) return scale_ * scale_;
  return scale_ * scale_ * kPi * kPi / 3.0;
}

NoiseModel NoiseModel::WithVariance(double variance) const {
  if (kind_ == Kind::kGaussian) return NoiseModel(kind_, std::sqrt(variance));
  return NoiseModel(kind_, std::sqrt(3.0 * variance) / kPi);
}

std::string NoiseModel::Name() const {
  return absl::StrCat(kind_ == Kind::kLogistic ? "logistic" : "gaussian", "(",
                      scale_, ")");
}

double NoiseModel::Cdf(double s) const {
  if (std::isnan(s)) return s;
  const double z = s / scale_;
  if (kind_ == Kind::kLogistic) return StdLogisticCdf(z);
  return NormalCdf(z);
}

double NoiseModel::Cdf(const ExtReal& s) const {
  if (s.is_neg_inf()) return 0.0;
  if (s.is_pos_inf()) return 1.0;
  return Cdf(s.value());
}

double NoiseModel::PartialMean(double s) const {
  if (!std::isfinite(s)) return 0.0;
  const double z = s / scale_;
  if (kind_ == Kind::kLogistic) return -scale_ * StdLogisticEntropy(z);
  return -scale_ * NormalPdf(z);
}

double NoiseModel::PartialMean(const ExtReal& s) const {
  if (!s.is_finite()) return 0.0;
  return PartialMean(s.value());
}

// E(e | e <= z) for the standardized law.
double NoiseModel::StdLeftTailMean(double z) const {
  if (kind_ == Kind::kLogistic) {
    // G/F = -softplus(-z) - e^{-z} softplus(z).
    return -Softplus(-z) - ScaledSoftplus(z);
  }
  if (z < 0) return -1.0 / MillsRatio(-z);
  return -NormalPdf(z) / NormalCdf(z);
}

// E(e | za < e <= zb) for the standardized law, za < zb finite, za < 0.
double NoiseModel::StdMiddleMean(double za, double zb) const {
  const double w = zb - za;
  if (w < 1e-7) return 0.5 * (za + zb);
  if (kind_ == Kind::kLogistic) {
    if (zb < -30.0) {
      // Deep left tail: density proportional to e^{x}.
      return zb - 1.0 + w / std::expm1(w);
    }
    const double num = -StdLogisticEntropy(zb) + StdLogisticEntropy(za);
    const double den = StdLogisticCdf(zb) - StdLogisticCdf(za);
    return num / den;
  }
  if (zb < -5.0) {
    // Divide numerator and denominator by phi(zb) to avoid underflow.
    const double r = std::exp(0.5 * (zb * zb - za * za));
    const double den = MillsRatio(-zb) - r * MillsRatio(-za);
    return (r - 1.0) / den;
  }
  const double num = NormalPdf(za) - NormalPdf(zb);
  const double den = NormalCdf(zb) - NormalCdf(za);
  return num / den;
}

double NoiseModel::ConditionalMean(const ExtReal& a, const ExtReal& b) const {
  if (a.is_neg_inf() && b.is_pos_inf()) return 0.0;
  const ExtReal za = Scaled(a, scale_);
  const ExtReal zb = Scaled(b, scale_);
  double z;
  if (za.is_neg_inf()) {
    z = StdLeftTailMean(zb.value());
  } else if (zb.is_pos_inf()) {
    z = -StdLeftTailMean(-za.value());
  } else if (za.value() >= 0.0) {
    z = -StdMiddleMean(-zb.value(), -za.value());
  } else {
    z = StdMiddleMean(za.value(), zb.value());
  }
  double mean = scale_ * z;
  if (a.is_finite()) mean = std::max(mean, a.value());
  if (b.is_finite()) mean = std::min(mean, b.value());
  return mean;
}

double NoiseModel::ConditionalMean(const Range& r) const {
  const auto& parts = r.parts();
  if (parts.size() == 1) return ConditionalMean(parts[0].lo, parts[0].hi);
  double num = 0.0, den = 0.0;
  double best_mass = -1.0, best_mean = 0.0;
  for (const Interval& iv : parts) {
    const double m = Cdf(iv.hi) - Cdf(iv.lo);
    const double mu = ConditionalMean(iv.lo, iv.hi);
    num += m * mu;
    den += m;
    if (m > best_mass) {
      best_mass = m;
      best_mean = mu;
    }
  }
  if (den > 1e-300) return num / den;
  return best_mean;
}

double NoiseModel::ConditionalSecondMoment(const ExtReal& a, const ExtReal& b) const {
  const double mean = ConditionalMean(a, b);
  if (kind_ == Kind::kGaussian) {
    // E(z^2 | za < z <= zb) = 1 + (za phi(za) - zb phi(zb)) / D, evaluated
    // on the left side of the origin (by symmetry) and divided through by
    // phi(zb) when the interval sits in the far tail.
    ExtReal za = Scaled(a, scale_), zb = Scaled(b, scale_);
    if (za.is_finite() && za.value() >= 0.0) {
      const ExtReal t = za;
      za = zb.is_finite() ? ExtReal(-zb.value()) : ExtReal::NegInf();
      zb = ExtReal(-t.value());
    }
    double v;
    if (zb.is_finite() && zb.value() < -5.0) {
      const double hi = zb.value();
      const double r = za.is_finite() ? std::exp(0.5 * (hi * hi - za.value() * za.value())) : 0.0;
      const double lo_term = za.is_finite() ? za.value() * r : 0.0;
      const double den = MillsRatio(-hi) - (za.is_finite() ? r * MillsRatio(-za.value()) : 0.0);
      v = 1.0 + (lo_term - hi) / den;
    } else {
      const auto zphi = [](const ExtReal& z) {
        return z.is_finite() ? z.value() * NormalPdf(z.value()) : 0.0;
      };
      const auto cdf = [](const ExtReal& z) {
        return z.is_finite() ? NormalCdf(z.value()) : (z.is_pos_inf() ? 1.0 : 0.0);
      };
      v = 1.0 + (zphi(za) - zphi(zb)) / (cdf(zb) - cdf(za));
    }
    return std::max(scale_ * scale_ * v, mean * mean);
  }
  // Logistic: integrate in standardized units, as offsets d from the point
  // of the interval nearest the origin (the in-interval mode), over at most
  // 60 scales on either side; the density there is below e^{-60} of the mode.
  // E(z^2) = r^2 + 2 r E(d) + E(d^2) keeps far-tail intervals precise.
  const double s = scale_;
  const double za = a.is_finite() ? a.value() / s : -std::numeric_limits<double>::infinity();
  const double zb = b.is_finite() ? b.value() / s : std::numeric_limits<double>::infinity();
  const double r = std::clamp(0.0, za, zb);
  const double lo = std::max(za, r - 60.0) - r;
  const double hi = std::min(zb, r + 60.0) - r;
  if (!(hi > lo)) return mean * mean;
  const auto log_density = [](double z) {
    const double t = std::abs(z);
    return -t - 2.0 * std::log1p(std::exp(-t));
  };
  const double log_ref = log_density(r);
  const auto w = [&](double d) { return std::exp(log_density(r + d) - log_ref); };
  using Gk = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double m0 = Gk::integrate(w, lo, hi, 15, 1e-14);
  const double m1 = Gk::integrate([&](double d) { return d * w(d); }, lo, hi, 15, 1e-14);
  const double m2 = Gk::integrate([&](double d) { return d * d * w(d); }, lo, hi, 15, 1e-14);
  const double ez2 = r * r + 2.0 * r * (m1 / m0) + m2 / m0;
  return std::max(s * s * ez2, mean * mean);
}

double NoiseModel::ConditionalSecondMoment(const Range& r) const {
  const auto& parts = r.parts();
  if (parts.size() == 1) return ConditionalSecondMoment(parts[0].lo, parts[0].hi);
  double num = 0.0, den = 0.0;
  for (const Interval& iv : parts) {
    const double m = Cdf(iv.hi) - Cdf(iv.lo);
    num += m * ConditionalSecondMoment(iv.lo, iv.hi);
    den += m;
  }
  return den > 1e-300 ? num / den : 0.0;
}

}  // namespace intpriv
