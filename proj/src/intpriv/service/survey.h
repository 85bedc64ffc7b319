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

// Survey definitions: the questions a collector asks, each with its domain
// and mechanism, plus the JSON form used by the HTTP API and the event log.

#ifndef INTPRIV_SERVICE_SURVEY_H_
#define INTPRIV_SERVICE_SURVEY_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "intpriv/core/range.h"
#include "intpriv/mechanisms/config.h"
#include "json.hpp"

namespace intpriv {

inline constexpr int kApiSchemaVersion = 1;

// Attaches / reads the offending request field of a ValidationError.
absl::Status WithField(absl::Status status, absl::string_view field);
std::optional<std::string> ErrorField(const absl::Status& status);
absl::Status ValidationError(absl::string_view field, absl::string_view detail);

struct QuestionDef {
  std::string prompt;
  // Prompt of progressive rounds after the first; "{u}" is replaced by the
  // label of the round's first anchor.
  std::string follow_up_prompt = "And is it ≤ {u}?";
  double lo = 0.0;  // domain (lo, hi]
  double hi = 1.0;
  MechanismConfig mechanism;
  bool allow_exact = false;
  bool allow_opt_out = false;
  int display_precision = 1;
  // One-shot anchors must fall (up to the 1e-6 tails of their laws) inside
  // the domain widened by this many domain widths on each side.
  double envelope_margin = 1.0;

  bool progressive() const { return mechanism.progressive().has_value(); }
  bool selective() const { return mechanism.selective().has_value(); }
};

struct SurveyDefinition {
  std::string id;
  std::string title;
  std::vector<QuestionDef> questions;
  std::string created_at;

  // Client form: {"schema":1,"title":..,"questions":[..]}; id and
  // created_at are ignored on input and assigned by the service.
  static absl::StatusOr<SurveyDefinition> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

// Checks every invariant of a definition; errors are ValidationError with a
// field path such as "questions[2].allow_opt_out".
absl::Status ValidateSurvey(const SurveyDefinition& def);

// Human-readable choice label under the half-open convention:
// "≤ a", "a – b" for (a, b], "> b", unions joined by " or ".
std::string RangeLabel(const Range& r, int precision);

}  // namespace intpriv

#endif  // INTPRIV_SERVICE_SURVEY_H_
