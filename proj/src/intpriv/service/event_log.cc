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

#include "intpriv/service/event_log.h"

#include <algorithm>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"
#include "intpriv/service/survey.h"

namespace intpriv {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& EventFields() {
  static const auto* fields = new std::map<std::string, std::set<std::string>>{
      {"SurveyCreated", {"survey"}},
      {"SessionStarted", {"session_id", "survey_id", "seed"}},
      {"QuestionIssued",
       {"session_id", "question", "round", "issue", "anchors", "topology", "ranges"}},
      {"AnswerRecorded",
       {"session_id", "question", "round", "issue", "choice", "exact", "opt_out", "coverage", "w",
        "outcome"}},
      {"SessionClosed", {"session_id", "reason"}},
  };
  return *fields;
}

}  // namespace

absl::Status ValidateEvent(const json& event) {
  if (!event.is_object()) return InvalidArgument("SchemaViolation", "event must be an object");
  if (event.value("schema", 0) != kApiSchemaVersion) {
    return InvalidArgument("SchemaViolation", "unsupported or missing schema version");
  }
  if (!event.contains("seq") || !event["seq"].is_number_unsigned()) {
    return InvalidArgument("SchemaViolation", "missing seq");
  }
  if (!event.contains("type") || !event["type"].is_string()) {
    return InvalidArgument("SchemaViolation", "missing type");
  }
  const auto it = EventFields().find(event["type"].get<std::string>());
  if (it == EventFields().end()) {
    return InvalidArgument("SchemaViolation",
                           absl::StrCat("unknown event type ", event["type"].get<std::string>()));
  }
  for (const auto& [key, value] : event.items()) {
    if (key == "schema" || key == "seq" || key == "type") continue;
    if (!it->second.count(key)) {
      return InvalidArgument("SchemaViolation",
                             absl::StrCat("field ", key, " is not allowed in ", it->first));
    }
  }
  for (const std::string& key : it->second) {
    if (!event.contains(key)) {
      return InvalidArgument("SchemaViolation",
                             absl::StrCat(it->first, " is missing field ", key));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::unique_ptr<EventLog>> EventLog::Open(const std::string& path) {
  auto log = std::make_unique<EventLog>();
  {
    std::ifstream in(path);
    std::string line;
    size_t line_no = 0;
    while (in && std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json e = json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (e.is_discarded()) {
        return InvalidArgument("ParseError", absl::StrCat("malformed event on line ", line_no));
      }
      const absl::Status valid = ValidateEvent(e);
      if (!valid.ok()) {
        return absl::Status(valid.code(), absl::StrCat(valid.message(), " (line ", line_no, ")"));
      }
      if (e["seq"].get<uint64_t>() != log->events_.size()) {
        return InvalidArgument("SchemaViolation",
                               absl::StrCat("out-of-order seq on line ", line_no));
      }
      log->events_.push_back(std::move(e));
    }
  }
  log->out_.emplace(path, std::ios::app);
  if (!*log->out_) {
    return FailedPrecondition("IoError", absl::StrCat("cannot open ", path, " for appending"));
  }
  return log;
}

absl::StatusOr<json> EventLog::Append(json event) {
  std::lock_guard<std::mutex> lock(mu_);
  event["schema"] = kApiSchemaVersion;
  event["seq"] = static_cast<uint64_t>(events_.size());
  INTPRIV_RETURN_IF_ERROR(ValidateEvent(event));
  if (out_) {
    *out_ << event.dump() << '\n';
    out_->flush();
    if (!*out_) return FailedPrecondition("IoError", "event log write failed");
  }
  events_.push_back(event);
  return event;
}

std::vector<json> EventLog::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return events_;
}

uint64_t EventLog::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return events_.size();
}

}  // namespace intpriv
