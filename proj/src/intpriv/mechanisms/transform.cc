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

#include "intpriv/mechanisms/transform.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"

namespace intpriv {

using nlohmann::json;

absl::StatusOr<MonotoneTransform> MonotoneTransform::Affine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    return InvalidArgument("InvalidTransform", "affine coefficients must be finite");
  }
  if (!(a > 0.0)) {
    return InvalidArgument("NonMonotone", "affine slope must be positive");
  }
  return MonotoneTransform(Kind::kAffine, {a, b});
}

MonotoneTransform MonotoneTransform::Exp() { return MonotoneTransform(Kind::kExp, {}); }

MonotoneTransform MonotoneTransform::LogisticLink() {
  return MonotoneTransform(Kind::kLogisticLink, {});
}

absl::StatusOr<MonotoneTransform> MonotoneTransform::OddPower(int p) {
  if (p < 1 || p % 2 == 0) return InvalidArgument("NonMonotone", "power must be odd and >= 1");
  return MonotoneTransform(Kind::kOddPower, {static_cast<double>(p)});
}

absl::StatusOr<MonotoneTransform> MonotoneTransform::Table(std::vector<double> x,
                                                           std::vector<double> y) {
  if (x.size() < 2 || x.size() != y.size()) {
    return InvalidArgument("InvalidTransform", "table needs >= 2 knots of matching size");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      return InvalidArgument("InvalidTransform", "table knots must be finite");
    }
    if (i > 0 && !(x[i - 1] < x[i])) {
      return InvalidArgument("InvalidTransform", "table x must strictly increase");
    }
  }
  MonotoneTransform t(Kind::kTable, {}, std::move(x), std::move(y));
  constexpr int kProbe = 1024;
  const double lo = t.x_.front(), hi = t.x_.back();
  double prev = t.Apply(lo);
  for (int k = 1; k < kProbe; ++k) {
    const double v = t.Apply(lo + (hi - lo) * k / (kProbe - 1));
    if (!(v > prev)) {
      return InvalidArgument("NonMonotone",
                             absl::StrCat("table is not increasing near probe ", k));
    }
    prev = v;
  }
  // The probe can step over a short decreasing segment; the knots cannot.
  for (size_t i = 1; i < t.y_.size(); ++i) {
    if (!(t.y_[i - 1] < t.y_[i])) {
      return InvalidArgument("NonMonotone", absl::StrCat("table decreases at knot ", i));
    }
  }
  return t;
}

double MonotoneTransform::Apply(double y) const {
  switch (kind_) {
    case Kind::kAffine:
      return params_[0] * y + params_[1];
    case Kind::kExp:
      return std::exp(y);
    case Kind::kLogisticLink:
      return y >= 0 ? 1.0 / (1.0 + std::exp(-y)) : std::exp(y) / (1.0 + std::exp(y));
    case Kind::kOddPower:
      return std::pow(y, params_[0]);
    case Kind::kTable: {
      size_t k = std::upper_bound(x_.begin(), x_.end(), y) - x_.begin();
      k = std::clamp<size_t>(k, 1, x_.size() - 1);
      const double t = (y - x_[k - 1]) / (x_[k] - x_[k - 1]);
      return y_[k - 1] + t * (y_[k] - y_[k - 1]);
    }
  }
  return y;
}

ExtReal MonotoneTransform::Inverse(double q) const {
  switch (kind_) {
    case Kind::kAffine:
      return ExtReal((q - params_[1]) / params_[0]);
    case Kind::kExp:
      if (!(q > 0.0)) return ExtReal::NegInf();
      return ExtReal(std::log(q));
    case Kind::kLogisticLink:
      if (!(q > 0.0)) return ExtReal::NegInf();
      if (!(q < 1.0)) return ExtReal::PosInf();
      return ExtReal(std::log(q) - std::log1p(-q));
    case Kind::kOddPower:
      return ExtReal(q < 0 ? -std::pow(-q, 1.0 / params_[0]) : std::pow(q, 1.0 / params_[0]));
    case Kind::kTable: {
      size_t k = std::upper_bound(y_.begin(), y_.end(), q) - y_.begin();
      k = std::clamp<size_t>(k, 1, y_.size() - 1);
      const double t = (q - y_[k - 1]) / (y_[k] - y_[k - 1]);
      return ExtReal(x_[k - 1] + t * (x_[k] - x_[k - 1]));
    }
  }
  return ExtReal(q);
}

Range MonotoneTransform::PullBack(const Range& r) const {
  std::vector<Interval> parts;
  for (const Interval& iv : r.parts()) {
    const ExtReal lo = iv.lo.is_finite() ? Inverse(iv.lo.value()) : iv.lo;
    const ExtReal hi = iv.hi.is_finite() ? Inverse(iv.hi.value()) : iv.hi;
    if (lo < hi && !lo.is_pos_inf() && !hi.is_neg_inf()) parts.push_back({lo, hi});
  }
  auto out = Range::Make(std::move(parts));
  return out.ok() ? *out : Range::Empty();
}

json MonotoneTransform::ToJson() const {
  switch (kind_) {
    case Kind::kAffine:
      return {{"kind", "affine"}, {"a", params_[0]}, {"b", params_[1]}};
    case Kind::kExp:
      return {{"kind", "exp"}};
    case Kind::kLogisticLink:
      return {{"kind", "logistic"}};
    case Kind::kOddPower:
      return {{"kind", "odd_power"}, {"p", static_cast<int>(params_[0])}};
    case Kind::kTable:
      return {{"kind", "table"}, {"x", x_}, {"y", y_}};
  }
  return nullptr;
}

absl::StatusOr<MonotoneTransform> MonotoneTransform::FromJson(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    return InvalidArgument("ParseError", "transform needs a kind");
  }
  const std::string kind = j["kind"];
  try {
    if (kind == "affine") return Affine(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "exp") return Exp();
    if (kind == "logistic") return LogisticLink();
    if (kind == "odd_power") return OddPower(j.at("p").get<int>());
    if (kind == "table") {
      return Table(j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>());
    }
  } catch (const json::exception& e) {
    return InvalidArgument("ParseError", absl::StrCat("transform: ", e.what()));
  }
  return InvalidArgument("ParseError", absl::StrCat("unknown transform kind ", kind));
}

std::string MonotoneTransform::Name() const {
  switch (kind_) {
    case Kind::kAffine:
      return absl::StrCat("affine(", params_[0], ", ", params_[1], ")");
    case Kind::kExp:
      return "exp";
    case Kind::kLogisticLink:
      return "logistic";
    case Kind::kOddPower:
      return absl::StrCat("power(", params_[0], ")");
    case Kind::kTable:
      return absl::StrCat("table(", x_.size(), " knots)");
  }
  return "";
}

}  // namespace intpriv
