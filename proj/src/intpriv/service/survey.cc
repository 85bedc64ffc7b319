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

#include "intpriv/service/survey.h"

#include <cmath>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_replace.h"
#include "intpriv/core/errors.h"
#include "intpriv/mechanisms/progressive.h"

namespace intpriv {

using nlohmann::json;

namespace {

constexpr char kFieldPayload[] = "intpriv/field";
constexpr double kEnvelopeTail = 1e-6;

std::string Idx(absl::string_view base, size_t i) { return absl::StrCat(base, "[", i, "]"); }

template <typename T>
absl::StatusOr<T> Get(const json& j, const char* key, const std::string& path,
                      std::optional<T> fallback = std::nullopt) {
  if (!j.contains(key) || j[key].is_null()) {
    if (fallback) return *fallback;
    return ValidationError(absl::StrCat(path, ".", key), "missing");
  }
  const json& v = j[key];
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) return ValidationError(absl::StrCat(path, ".", key), "must be a string");
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) return ValidationError(absl::StrCat(path, ".", key), "must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) {
      return ValidationError(absl::StrCat(path, ".", key), "must be an integer");
    }
  } else {
    if (!v.is_number()) return ValidationError(absl::StrCat(path, ".", key), "must be a number");
  }
  return v.get<T>();
}

absl::StatusOr<QuestionDef> QuestionFromJson(const json& j, const std::string& path) {
  if (!j.is_object()) return ValidationError(path, "must be an object");
  INTPRIV_ASSIGN_OR_RETURN(std::string prompt, Get<std::string>(j, "prompt", path));
  if (!j.contains("domain") || !j["domain"].is_array() || j["domain"].size() != 2 ||
      !j["domain"][0].is_number() || !j["domain"][1].is_number()) {
    return ValidationError(path + ".domain", "must be [lo, hi] with finite numbers");
  }
  if (!j.contains("mechanism")) return ValidationError(path + ".mechanism", "missing");
  auto cfg = MechanismConfig::FromJson(j["mechanism"]);
  if (!cfg.ok()) return WithField(cfg.status(), path + ".mechanism");
  QuestionDef q{.prompt = std::move(prompt), .mechanism = *std::move(cfg)};
  q.lo = j["domain"][0].get<double>();
  q.hi = j["domain"][1].get<double>();
  INTPRIV_ASSIGN_OR_RETURN(q.follow_up_prompt,
                           Get<std::string>(j, "follow_up_prompt", path, q.follow_up_prompt));
  INTPRIV_ASSIGN_OR_RETURN(q.allow_exact, Get<bool>(j, "allow_exact", path, false));
  INTPRIV_ASSIGN_OR_RETURN(q.allow_opt_out, Get<bool>(j, "allow_opt_out", path, false));
  INTPRIV_ASSIGN_OR_RETURN(q.display_precision, Get<int>(j, "display_precision", path, 1));
  INTPRIV_ASSIGN_OR_RETURN(q.envelope_margin, Get<double>(j, "envelope_margin", path, 1.0));
  return q;
}

json QuestionToJson(const QuestionDef& q) {
  return {{"prompt", q.prompt},
          {"follow_up_prompt", q.follow_up_prompt},
          {"domain", {q.lo, q.hi}},
          {"mechanism", q.mechanism.ToJson()},
          {"allow_exact", q.allow_exact},
          {"allow_opt_out", q.allow_opt_out},
          {"display_precision", q.display_precision},
          {"envelope_margin", q.envelope_margin}};
}

// Data-scale anchor extent of one law, including centered offsets and the
// pullback transform.
absl::Status CheckEnvelope(const QuestionDef& q, const std::string& path) {
  const AnchorSampler& s = q.mechanism.sampler();
  const double w = q.hi - q.lo;
  const double env_lo = q.lo - q.envelope_margin * w;
  const double env_hi = q.hi + q.envelope_margin * w;
  double lo_off = 0.0, hi_off = 0.0;
  for (double o : s.offsets()) {
    lo_off = std::min(lo_off, o);
    hi_off = std::max(hi_off, o);
  }
  for (const Distribution& law : s.laws()) {
    double a = law.Quantile(kEnvelopeTail) + lo_off;
    double b = law.Quantile(1.0 - kEnvelopeTail) + hi_off;
    if (const auto& g = q.mechanism.transform()) {
      const ExtReal ga = g->Inverse(a), gb = g->Inverse(b);
      if (!ga.is_finite() || !gb.is_finite()) {
        return ValidationError(path + ".mechanism.sampler",
                               "anchors map to infinity under the transform");
      }
      a = ga.value();
      b = gb.value();
    }
    if (!(a >= env_lo && b <= env_hi)) {
      return ValidationError(
          path + ".mechanism.sampler",
          absl::StrFormat("anchor support [%g, %g] leaves the envelope [%g, %g]", a, b, env_lo,
                          env_hi));
    }
  }
  return absl::OkStatus();
}

std::string Num(double x, int precision) { return absl::StrFormat("%.*f", precision, x); }

}  // namespace

absl::Status WithField(absl::Status status, absl::string_view field) {
  if (status.ok()) return status;
  if (ErrorKind(status) != "ValidationError") {
    status = InvalidArgument("ValidationError", status.message());
  }
  status.SetPayload(kFieldPayload, absl::Cord(field));
  return status;
}

std::optional<std::string> ErrorField(const absl::Status& status) {
  auto p = status.GetPayload(kFieldPayload);
  if (!p) return std::nullopt;
  return std::string(*p);
}

absl::Status ValidationError(absl::string_view field, absl::string_view detail) {
  return WithField(InvalidArgument("ValidationError", absl::StrCat(field, ": ", detail)), field);
}

absl::StatusOr<SurveyDefinition> SurveyDefinition::FromJson(const json& j) {
  if (!j.is_object()) return ValidationError("", "survey must be an object");
  if (!j.contains("schema") || j["schema"] != kApiSchemaVersion) {
    return ValidationError("schema", "unsupported or missing schema version");
  }
  SurveyDefinition def;
  INTPRIV_ASSIGN_OR_RETURN(def.title, Get<std::string>(j, "title", "survey"));
  if (!j.contains("questions") || !j["questions"].is_array()) {
    return ValidationError("questions", "must be an array");
  }
  for (size_t i = 0; i < j["questions"].size(); ++i) {
    INTPRIV_ASSIGN_OR_RETURN(QuestionDef q, QuestionFromJson(j["questions"][i], Idx("questions", i)));
    def.questions.push_back(std::move(q));
  }
  if (j.contains("id") && j["id"].is_string()) def.id = j["id"].get<std::string>();
  if (j.contains("created_at") && j["created_at"].is_string()) {
    def.created_at = j["created_at"].get<std::string>();
  }
  INTPRIV_RETURN_IF_ERROR(ValidateSurvey(def));
  return def;
}

json SurveyDefinition::ToJson() const {
  json qs = json::array();
  for (const QuestionDef& q : questions) qs.push_back(QuestionToJson(q));
  return {{"schema", kApiSchemaVersion},
          {"id", id},
          {"title", title},
          {"created_at", created_at},
          {"questions", std::move(qs)}};
}

absl::Status ValidateSurvey(const SurveyDefinition& def) {
  if (def.questions.empty()) return ValidationError("questions", "at least one question required");
  for (size_t i = 0; i < def.questions.size(); ++i) {
    const QuestionDef& q = def.questions[i];
    const std::string path = Idx("questions", i);
    if (q.prompt.empty()) return ValidationError(path + ".prompt", "must not be empty");
    if (!std::isfinite(q.lo) || !std::isfinite(q.hi) || !(q.lo < q.hi)) {
      return ValidationError(path + ".domain", "must be finite with lo < hi");
    }
    if (q.display_precision < 0 || q.display_precision > 12) {
      return ValidationError(path + ".display_precision", "must be in [0, 12]");
    }
    if (!(q.envelope_margin >= 0.0) || !std::isfinite(q.envelope_margin)) {
      return ValidationError(path + ".envelope_margin", "must be a finite number >= 0");
    }
    if (q.mechanism.acceptable().kind != AcceptableRegion::Kind::kNone) {
      return ValidationError(path + ".mechanism.acceptable",
                             "exact disclosure in surveys goes through allow_exact");
    }
    if (q.progressive()) {
      if (!q.allow_opt_out) {
        return ValidationError(path + ".allow_opt_out", "progressive questions need opt-out");
      }
      if (q.allow_exact) {
        return ValidationError(path + ".allow_exact",
                               "progressive questions do not take exact values");
      }
      if (q.selective()) {
        return ValidationError(path + ".mechanism.selective",
                               "selective and progressive cannot be combined");
      }
      if (q.mechanism.transform()) {
        return ValidationError(path + ".mechanism.transform",
                               "progressive questions draw on the data scale");
      }
      auto started = ProgressiveSession::Start(q.lo, q.hi, q.mechanism);
      if (!started.ok()) return WithField(started.status(), path + ".mechanism.progressive");
    } else {
      INTPRIV_RETURN_IF_ERROR(CheckEnvelope(q, path));
    }
  }
  return absl::OkStatus();
}

std::string RangeLabel(const Range& r, int precision) {
  std::string out;
  for (const Interval& iv : r.parts()) {
    if (!out.empty()) out += " or ";
    if (iv.lo.is_neg_inf() && iv.hi.is_pos_inf()) {
      out += "any value";
    } else if (iv.lo.is_neg_inf()) {
      absl::StrAppend(&out, "≤ ", Num(iv.hi.value(), precision));
    } else if (iv.hi.is_pos_inf()) {
      absl::StrAppend(&out, "> ", Num(iv.lo.value(), precision));
    } else {
      absl::StrAppend(&out, Num(iv.lo.value(), precision), " – ", Num(iv.hi.value(), precision));
    }
  }
  return out;
}

}  // namespace intpriv
