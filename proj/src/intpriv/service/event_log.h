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

// Append-only JSON-lines event log. Every line is one event object
//   {"schema":1,"seq":n,"type":T,...}
// with T one of SurveyCreated, SessionStarted, QuestionIssued,
// AnswerRecorded, SessionClosed. Each type has a closed field list, which
// is how the log is kept free of respondent identifiers.

#ifndef INTPRIV_SERVICE_EVENT_LOG_H_
#define INTPRIV_SERVICE_EVENT_LOG_H_

#include <cstdint>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace intpriv {

// Fails with SchemaViolation on unknown types, missing or extra fields.
absl::Status ValidateEvent(const nlohmann::json& event);

class EventLog {
 public:
  // In-memory log.
  EventLog() = default;
  // File-backed log: existing events are loaded (and validated) and new
  // ones appended. Fails with ParseError / SchemaViolation naming the line.
  static absl::StatusOr<std::unique_ptr<EventLog>> Open(const std::string& path);

  // Stamps schema and seq, validates, writes and flushes one line.
  absl::StatusOr<nlohmann::json> Append(nlohmann::json event);

  std::vector<nlohmann::json> Snapshot() const;
  uint64_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<nlohmann::json> events_;
  std::optional<std::ofstream> out_;
};

}  // namespace intpriv

#endif  // INTPRIV_SERVICE_EVENT_LOG_H_
