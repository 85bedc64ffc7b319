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

#ifndef INTPRIV_CORE_ERRORS_H_
#define INTPRIV_CORE_ERRORS_H_

#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace intpriv {

// Errors carry a stable kind tag ("InconsistentRecords", "NoData", ...) as
// the message prefix, so callers and the HTTP layer can branch on it without
// parsing free text.
inline absl::Status MakeError(absl::StatusCode code, absl::string_view kind,
                              absl::string_view detail) {
  return absl::Status(code, absl::StrCat(kind, ": ", detail));
}

inline absl::Status InvalidArgument(absl::string_view kind,
                                    absl::string_view detail) {
  return MakeError(absl::StatusCode::kInvalidArgument, kind, detail);
}

inline absl::Status FailedPrecondition(absl::string_view kind,
                                       absl::string_view detail) {
  return MakeError(absl::StatusCode::kFailedPrecondition, kind, detail);
}

// Returns the kind tag of `status`, or the empty string for OK statuses and
// statuses created without one.
inline std::string ErrorKind(const absl::Status& status) {
  if (status.ok()) return "";
  absl::string_view msg = status.message();
  const auto pos = msg.find(": ");
  if (pos == absl::string_view::npos) return "";
  return std::string(msg.substr(0, pos));
}

}  // namespace intpriv

#define INTPRIV_RETURN_IF_ERROR(expr)       \
  do {                                      \
    const absl::Status _st = (expr);        \
    if (!_st.ok()) return _st;              \
  } while (0)

#define INTPRIV_CONCAT_INNER_(a, b) a##b
#define INTPRIV_CONCAT_(a, b) INTPRIV_CONCAT_INNER_(a, b)

#define INTPRIV_ASSIGN_OR_RETURN(lhs, rexpr)                             \
  INTPRIV_ASSIGN_OR_RETURN_IMPL_(INTPRIV_CONCAT_(_statusor, __LINE__), \
                                 lhs, rexpr)

#define INTPRIV_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                   \
  if (!statusor.ok()) return statusor.status();              \
  lhs = std::move(statusor).value()

#endif  // INTPRIV_CORE_ERRORS_H_
