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

// The collection service: surveys, respondent sessions, randomized
// questions, answers, export and estimation. All mutations go through the
// event log first; the in-memory state is a pure function of the log and
// is rebuilt from it on startup.

#ifndef INTPRIV_SERVICE_SURVEY_SERVICE_H_
#define INTPRIV_SERVICE_SURVEY_SERVICE_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/record.h"
#include "intpriv/core/step_cdf.h"
#include "intpriv/coverage/coverage.h"
#include "intpriv/kernels/parallel.h"
#include "intpriv/mechanisms/progressive.h"
#include "intpriv/service/event_log.h"
#include "intpriv/service/survey.h"
#include "json.hpp"

namespace intpriv {

struct QuestionPayload {
  std::string session_id;
  size_t question = 0;  // 0-based
  uint64_t issue = 0;   // per-session issue number, echoed by the answer
  int round = 1;
  int max_rounds = 1;
  std::string prompt;
  std::vector<Range> choices;
  int precision = 1;
  bool allow_exact = false;
  bool allow_opt_out = false;
  Range current_range;
  std::optional<double> coverage;  // prior mass of current_range, if a prior is configured

  nlohmann::json ToJson() const;
};

struct Answer {
  uint64_t issue = 0;
  std::optional<size_t> choice;  // 1-based
  std::optional<double> exact;
  bool opt_out = false;

  static absl::StatusOr<Answer> FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
  bool operator==(const Answer&) const = default;
};

enum class AnswerOutcome { kNextRound, kQuestionDone, kNullResponse };

struct AnswerResult {
  AnswerOutcome outcome = AnswerOutcome::kQuestionDone;
  std::optional<QuestionPayload> next;
  bool session_closed = false;

  nlohmann::json ToJson() const;
};

enum class RoundSelection { kFirst, kAll };

struct EstimateOptions {
  RoundSelection rounds = RoundSelection::kAll;
  std::optional<StepCdf> reference;
};

struct EstimateResult {
  RoundSelection rounds = RoundSelection::kAll;
  size_t records = 0;  // non-null
  size_t nulls = 0;
  StepCdf cdf;
  nlohmann::json npmle;  // NpmleResult::ToJson
  CoverageReport coverage;
  std::optional<double> energy_distance;
  // Selective questions: how often the gate's coverage condition held, to
  // compare rho against.
  std::optional<nlohmann::json> selective;

  nlohmann::json ToJson() const;
};

// NPMLE of the records, coverage under the NPMLE plug-in prior, and the
// energy distance to `opts.reference` over the question's domain widened
// to both supports. NoData without a non-null record.
absl::StatusOr<EstimateResult> EstimateFromRecords(std::span<const WireRecord> records,
                                                   const QuestionDef& question,
                                                   const EstimateOptions& opts);

// {"jumps":[[x,F],...]} or a bare [[x,F],...] array.
absl::StatusOr<StepCdf> StepCdfFromJson(const nlohmann::json& j);

class SurveyService {
 public:
  struct Options {
    uint64_t seed = 1;
    // ISO-8601 UTC timestamp for created_at; the wall clock by default.
    std::function<std::string()> clock;
    Execution exec = Execution::kParallel;
  };

  // Replays every event already in `log`. Fails with ReplayMismatch when
  // re-executing the log does not reproduce it.
  static absl::StatusOr<std::unique_ptr<SurveyService>> Create(std::unique_ptr<EventLog> log,
                                                               Options opts);

  // Error kinds: ValidationError (with field), NotFound, SessionClosed,
  // QuestionDone, RoundNotReady, StaleQuestion, FidelityViolation, NoData.
  absl::StatusOr<std::string> CreateSurvey(const nlohmann::json& definition);
  absl::StatusOr<SurveyDefinition> GetSurvey(const std::string& survey_id) const;
  absl::StatusOr<std::string> StartSession(const std::string& survey_id);
  absl::StatusOr<QuestionPayload> NextQuestion(const std::string& session_id, size_t question);
  absl::StatusOr<AnswerResult> SubmitAnswer(const std::string& session_id, size_t question,
                                            const Answer& answer);
  // Ends a session early. Progressive questions keep what was collected.
  absl::Status CloseSession(const std::string& session_id);

  absl::StatusOr<std::vector<WireRecord>> ExportRecords(
      const std::string& survey_id, size_t question,
      RoundSelection rounds = RoundSelection::kAll) const;
  absl::StatusOr<std::string> ExportJsonLines(const std::string& survey_id, size_t question,
                                              RoundSelection rounds = RoundSelection::kAll) const;
  absl::StatusOr<EstimateResult> Estimate(const std::string& survey_id, size_t question,
                                          const EstimateOptions& opts) const;

  // Every session's state, for replay comparisons and debugging.
  nlohmann::json StateJson() const;
  const EventLog& log() const { return *log_; }

 private:
  struct OneShot {
    std::optional<uint64_t> issue;
    std::vector<double> anchors;
    std::optional<Partition> partition;
    std::optional<WireRecord> record;
    std::optional<double> coverage;  // selective gate input
  };
  struct QuestionState {
    std::optional<ProgressiveSession> progressive;
    OneShot one_shot;
    std::optional<uint64_t> pending_issue;
    std::optional<uint64_t> answered_issue;  // last answered, for idempotent retries
    std::optional<Answer> last_answer;
    std::optional<AnswerResult> last_result;
    bool done = false;
    bool abandoned = false;
  };
  struct Session {
    std::string id;
    std::string survey_id;
    uint64_t seed = 0;
    uint64_t next_issue = 1;
    bool closed = false;
    std::string close_reason;
    std::vector<QuestionState> questions;
  };

  SurveyService(std::unique_ptr<EventLog> log, Options opts)
      : log_(std::move(log)), opts_(std::move(opts)) {}

  absl::Status Replay();
  // Appends `event`, or during replay checks it against the next logged one.
  absl::Status Emit(nlohmann::json event);

  absl::StatusOr<std::string> CreateSurveyLocked(SurveyDefinition def);
  absl::StatusOr<std::string> StartSessionLocked(const std::string& survey_id, std::string id,
                                                 uint64_t seed);
  absl::StatusOr<QuestionPayload> NextQuestionLocked(const std::string& session_id,
                                                     size_t question);
  absl::StatusOr<AnswerResult> SubmitAnswerLocked(const std::string& session_id, size_t question,
                                                  const Answer& answer);
  absl::Status CloseSessionLocked(const std::string& session_id, const std::string& reason);

  absl::StatusOr<Session*> FindSession(const std::string& session_id);
  absl::StatusOr<const QuestionDef*> FindQuestion(const std::string& survey_id,
                                                  size_t question) const;
  QuestionPayload Payload(const Session& s, size_t question, uint64_t issue,
                          const ProgressiveQuestion* pq) const;
  nlohmann::json IssuedEvent(const Session& s, size_t question, int round, uint64_t issue,
                             const std::vector<double>& anchors, const Partition& p) const;
  absl::StatusOr<std::vector<WireRecord>> ExportLocked(const std::string& survey_id,
                                                       size_t question,
                                                       RoundSelection rounds) const;

  std::unique_ptr<EventLog> log_;
  Options opts_;
  mutable std::mutex mu_;
  std::map<std::string, SurveyDefinition> surveys_;
  std::vector<std::string> survey_order_;
  std::map<std::string, Session> sessions_;
  std::vector<std::string> session_order_;
  // Events still to be matched while replaying.
  std::deque<nlohmann::json> replay_;
  bool replaying_ = false;
};

const char* OutcomeName(AnswerOutcome o);

}  // namespace intpriv

#endif  // INTPRIV_SERVICE_SURVEY_SERVICE_H_
