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

#include "intpriv/service/survey_service.h"

#include <algorithm>
#include <cmath>
#include <ctime>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_replace.h"
#include "intpriv/core/errors.h"
#include "intpriv/core/prior.h"
#include "intpriv/estimation/functionals.h"
#include "intpriv/estimation/npmle.h"
#include "intpriv/mechanisms/mechanisms.h"

namespace intpriv {

using nlohmann::json;

namespace {

bool IsCount(const json& j) { return j.is_number_integer() && j.get<int64_t>() >= 0; }

// Seed-derivation tags.
constexpr uint64_t kSurveyIdTag = 1;
constexpr uint64_t kSessionIdTag = 2;
constexpr uint64_t kSessionSeedTag = 3;
constexpr uint64_t kDrawAnchors = 0;
constexpr uint64_t kDrawGate = 1;

absl::Status NotFound(absl::string_view what) {
  return MakeError(absl::StatusCode::kNotFound, "NotFound", what);
}

std::string WallClock() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json NullableDouble(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json RangeView(const Range& r, int precision) {
  return {{"label", RangeLabel(r, precision)}, {"range", RangeToJson(r)}};
}

std::optional<Prior> BadgePrior(const QuestionDef& q) {
  if (q.selective()) return q.mechanism.selective()->prior;
  if (q.progressive() && q.mechanism.progressive()->prior) return *q.mechanism.progressive()->prior;
  return std::nullopt;
}

json JumpsToJson(const StepCdf& cdf) {
  json jumps = json::array();
  for (const auto& j : cdf.jumps()) jumps.push_back({j.x, j.cdf});
  return jumps;
}

}  // namespace

const char* OutcomeName(AnswerOutcome o) {
  switch (o) {
    case AnswerOutcome::kNextRound:
      return "next_round";
    case AnswerOutcome::kQuestionDone:
      return "question_done";
    case AnswerOutcome::kNullResponse:
      break;
  }
  return "null_response";
}

json QuestionPayload::ToJson() const {
  json choices_json = json::array();
  for (size_t i = 0; i < choices.size(); ++i) {
    json c = RangeView(choices[i], precision);
    c["index"] = i + 1;
    choices_json.push_back(std::move(c));
  }
  json j = {{"schema", kApiSchemaVersion},
            {"session_id", session_id},
            {"question", question},
            {"issue", issue},
            {"round", round},
            {"max_rounds", max_rounds},
            {"prompt", prompt},
            {"choices", std::move(choices_json)},
            {"allow_exact", allow_exact},
            {"allow_opt_out", allow_opt_out},
            {"current_range", RangeView(current_range, precision)},
            {"coverage", NullableDouble(coverage)}};
  if (allow_opt_out) j["opt_out_label"] = "Not wish to answer";
  return j;
}

absl::StatusOr<Answer> Answer::FromJson(const json& j) {
  if (!j.is_object()) return ValidationError("", "answer must be an object");
  if (!j.contains("schema") || j["schema"] != kApiSchemaVersion) {
    return ValidationError("schema", "unsupported or missing schema version");
  }
  Answer a;
  if (!j.contains("issue") || !IsCount(j["issue"])) {
    return ValidationError("issue", "must be the issue number of the question being answered");
  }
  a.issue = j["issue"].get<uint64_t>();
  if (j.contains("choice") && !j["choice"].is_null()) {
    if (!IsCount(j["choice"]) || j["choice"].get<int64_t>() == 0) {
      return ValidationError("choice", "must be a positive integer");
    }
    a.choice = j["choice"].get<size_t>();
  }
  if (j.contains("exact") && !j["exact"].is_null()) {
    if (!j["exact"].is_number()) return ValidationError("exact", "must be a number");
    a.exact = j["exact"].get<double>();
  }
  if (j.contains("opt_out") && !j["opt_out"].is_null()) {
    if (!j["opt_out"].is_boolean()) return ValidationError("opt_out", "must be a boolean");
    a.opt_out = j["opt_out"].get<bool>();
  }
  return a;
}

json Answer::ToJson() const {
  return {{"schema", kApiSchemaVersion},
          {"issue", issue},
          {"choice", choice ? json(*choice) : json(nullptr)},
          {"exact", NullableDouble(exact)},
          {"opt_out", opt_out}};
}

json AnswerResult::ToJson() const {
  return {{"schema", kApiSchemaVersion},
          {"outcome", OutcomeName(outcome)},
          {"next", next ? next->ToJson() : json(nullptr)},
          {"session_closed", session_closed}};
}

json EstimateResult::ToJson() const {
  return {{"schema", kApiSchemaVersion},
          {"rounds", rounds == RoundSelection::kFirst ? "first" : "all"},
          {"records", records},
          {"nulls", nulls},
          {"cdf", JumpsToJson(cdf)},
          {"npmle", npmle},
          {"coverage", coverage.ToJson()},
          {"energy_distance", NullableDouble(energy_distance)},
          {"selective", selective ? *selective : json(nullptr)}};
}

absl::StatusOr<StepCdf> StepCdfFromJson(const json& j) {
  const json& arr = j.is_object() && j.contains("jumps") ? j["jumps"] : j;
  if (!arr.is_array()) return ValidationError("reference", "must be [[x, F], ...]");
  std::vector<StepCdf::Jump> jumps;
  for (const json& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      return ValidationError("reference", "each jump must be [x, F]");
    }
    jumps.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  auto cdf = StepCdf::FromJumps(std::move(jumps));
  if (!cdf.ok()) return WithField(cdf.status(), "reference");
  return cdf;
}

absl::StatusOr<EstimateResult> EstimateFromRecords(std::span<const WireRecord> records,
                                                   const QuestionDef& question,
                                                   const EstimateOptions& opts) {
  EstimateResult out;
  out.rounds = opts.rounds;
  for (const WireRecord& r : records) {
    if (std::holds_alternative<NullRecord>(r)) {
      ++out.nulls;
    } else {
      ++out.records;
    }
  }
  if (out.records == 0) return FailedPrecondition("NoData", "no non-null records");
  INTPRIV_ASSIGN_OR_RETURN(NpmleResult fit, Npmle(records));
  out.cdf = fit.cdf;
  out.npmle = fit.ToJson();
  out.npmle.erase("cdf");
  INTPRIV_ASSIGN_OR_RETURN(out.coverage,
                           CoverageOfRecords(records, Prior(fit.cdf, PriorProvenance::kNpmlePlugIn)));
  if (opts.reference) {
    double lo = std::min({question.lo, out.cdf.jumps().front().x,
                          opts.reference->jumps().front().x});
    double hi = std::max({question.hi, out.cdf.jumps().back().x, opts.reference->jumps().back().x});
    INTPRIV_ASSIGN_OR_RETURN(double d, EnergyDistance(out.cdf, *opts.reference, lo, hi));
    out.energy_distance = d;
  }
  return out;
}

absl::StatusOr<std::unique_ptr<SurveyService>> SurveyService::Create(std::unique_ptr<EventLog> log,
                                                                     Options opts) {
  if (!log) log = std::make_unique<EventLog>();
  if (!opts.clock) opts.clock = WallClock;
  std::unique_ptr<SurveyService> svc(new SurveyService(std::move(log), std::move(opts)));
  INTPRIV_RETURN_IF_ERROR(svc->Replay());
  return svc;
}

absl::Status SurveyService::Replay() {
  std::lock_guard<std::mutex> lock(mu_);
  const std::vector<json> events = log_->Snapshot();
  replay_.assign(events.begin(), events.end());
  replaying_ = true;
  while (!replay_.empty()) {
    const json e = replay_.front();
    const std::string type = e["type"].get<std::string>();
    const size_t before = replay_.size();
    absl::Status st;
    if (type == "SurveyCreated") {
      auto def = SurveyDefinition::FromJson(e["survey"]);
      st = def.ok() ? CreateSurveyLocked(*std::move(def)).status() : def.status();
    } else if (type == "SessionStarted") {
      if (!e["seed"].is_number_unsigned() || !e["session_id"].is_string() ||
          !e["survey_id"].is_string()) {
        st = InvalidArgument("SchemaViolation", "malformed SessionStarted");
      } else {
        st = StartSessionLocked(e["survey_id"].get<std::string>(),
                                e["session_id"].get<std::string>(), e["seed"].get<uint64_t>())
                 .status();
      }
    } else if (type == "QuestionIssued") {
      st = NextQuestionLocked(e["session_id"].get<std::string>(), e["question"].get<size_t>())
               .status();
    } else if (type == "AnswerRecorded") {
      Answer a;
      a.issue = e["issue"].get<uint64_t>();
      if (!e["choice"].is_null()) a.choice = e["choice"].get<size_t>();
      if (!e["exact"].is_null()) a.exact = e["exact"].get<double>();
      a.opt_out = e["opt_out"].get<bool>();
      st = SubmitAnswerLocked(e["session_id"].get<std::string>(), e["question"].get<size_t>(), a)
               .status();
    } else if (type == "SessionClosed") {
      st = CloseSessionLocked(e["session_id"].get<std::string>(), e["reason"].get<std::string>());
    }
    if (!st.ok()) {
      replaying_ = false;
      return absl::InternalError(absl::StrCat("ReplayMismatch: event ", e["seq"].dump(), " (",
                                              type, "): ", st.message()));
    }
    if (replay_.size() == before) {
      replaying_ = false;
      return absl::InternalError(absl::StrCat("ReplayMismatch: event ", e["seq"].dump(), " (",
                                              type, ") is not reproduced"));
    }
  }
  replaying_ = false;
  return absl::OkStatus();
}

absl::Status SurveyService::Emit(json event) {
  if (!replaying_) return log_->Append(std::move(event)).status();
  if (replay_.empty()) {
    return absl::InternalError("ReplayMismatch: re-execution produced an extra event");
  }
  json logged = replay_.front();
  logged.erase("schema");
  logged.erase("seq");
  if (logged != event) {
    return absl::InternalError(absl::StrCat("ReplayMismatch: expected ", logged.dump(), " got ",
                                            event.dump()));
  }
  replay_.pop_front();
  return absl::OkStatus();
}

absl::StatusOr<std::string> SurveyService::CreateSurvey(const json& definition) {
  INTPRIV_ASSIGN_OR_RETURN(SurveyDefinition def, SurveyDefinition::FromJson(definition));
  std::lock_guard<std::mutex> lock(mu_);
  def.id = absl::StrFormat("svy-%016x", DeriveSeed(opts_.seed, {kSurveyIdTag, surveys_.size()}));
  def.created_at = opts_.clock();
  return CreateSurveyLocked(std::move(def));
}

absl::StatusOr<std::string> SurveyService::CreateSurveyLocked(SurveyDefinition def) {
  if (def.id.empty()) return InvalidArgument("ValidationError", "survey id missing");
  if (surveys_.count(def.id)) {
    return absl::InternalError(absl::StrCat("duplicate survey id ", def.id));
  }
  INTPRIV_RETURN_IF_ERROR(Emit({{"type", "SurveyCreated"}, {"survey", def.ToJson()}}));
  const std::string id = def.id;
  survey_order_.push_back(id);
  surveys_.emplace(id, std::move(def));
  return id;
}

absl::StatusOr<SurveyDefinition> SurveyService::GetSurvey(const std::string& survey_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = surveys_.find(survey_id);
  if (it == surveys_.end()) return NotFound(absl::StrCat("survey ", survey_id));
  return it->second;
}

absl::StatusOr<std::string> SurveyService::StartSession(const std::string& survey_id) {
  std::lock_guard<std::mutex> lock(mu_);
  const uint64_t ordinal = sessions_.size();
  Rng id_rng(DeriveSeed(opts_.seed, {kSessionIdTag, ordinal}));
  const uint64_t hi = id_rng.NextU64();
  const uint64_t lo = id_rng.NextU64();
  return StartSessionLocked(survey_id, absl::StrFormat("%016x%016x", hi, lo),
                            DeriveSeed(opts_.seed, {kSessionSeedTag, ordinal}));
}

absl::StatusOr<std::string> SurveyService::StartSessionLocked(const std::string& survey_id,
                                                              std::string id, uint64_t seed) {
  const auto it = surveys_.find(survey_id);
  if (it == surveys_.end()) return NotFound(absl::StrCat("survey ", survey_id));
  if (sessions_.count(id)) return absl::InternalError("duplicate session id");
  INTPRIV_RETURN_IF_ERROR(Emit({{"type", "SessionStarted"},
                                {"session_id", id},
                                {"survey_id", survey_id},
                                {"seed", seed}}));
  Session s;
  s.id = id;
  s.survey_id = survey_id;
  s.seed = seed;
  s.questions.resize(it->second.questions.size());
  session_order_.push_back(id);
  sessions_.emplace(id, std::move(s));
  return id;
}

absl::StatusOr<SurveyService::Session*> SurveyService::FindSession(const std::string& session_id) {
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return NotFound("session");
  return &it->second;
}

absl::StatusOr<const QuestionDef*> SurveyService::FindQuestion(const std::string& survey_id,
                                                               size_t question) const {
  const auto it = surveys_.find(survey_id);
  if (it == surveys_.end()) return NotFound(absl::StrCat("survey ", survey_id));
  if (question >= it->second.questions.size()) {
    return NotFound(absl::StrCat("question ", question));
  }
  return &it->second.questions[question];
}

QuestionPayload SurveyService::Payload(const Session& s, size_t question, uint64_t issue,
                                       const ProgressiveQuestion* pq) const {
  const QuestionDef& q = surveys_.at(s.survey_id).questions[question];
  const QuestionState& qs = s.questions[question];
  QuestionPayload p;
  p.session_id = s.id;
  p.question = question;
  p.issue = issue;
  p.precision = q.display_precision;
  p.allow_exact = q.allow_exact;
  p.allow_opt_out = q.allow_opt_out;
  p.prompt = q.prompt;
  if (pq) {
    p.round = pq->round;
    p.max_rounds = q.mechanism.progressive()->max_rounds;
    p.choices = pq->choices;
    p.current_range = qs.progressive->current_range();
    if (pq->round > 1 && !pq->anchors.empty()) {
      p.prompt = absl::StrReplaceAll(
          q.follow_up_prompt,
          {{"{u}", absl::StrFormat("%.*f", q.display_precision, pq->anchors.front())}});
    }
  } else {
    p.choices = qs.one_shot.partition->ranges();
    p.current_range = Range::Between(q.lo, q.hi);
  }
  if (const auto prior = BadgePrior(q)) p.coverage = prior->Mass(p.current_range);
  return p;
}

json SurveyService::IssuedEvent(const Session& s, size_t question, int round, uint64_t issue,
                                const std::vector<double>& anchors, const Partition& p) const {
  json pj = PartitionToJson(p);
  return {{"type", "QuestionIssued"}, {"session_id", s.id},       {"question", question},
          {"round", round},           {"issue", issue},           {"anchors", anchors},
          {"topology", pj["topology"]}, {"ranges", pj["ranges"]}};
}

absl::StatusOr<QuestionPayload> SurveyService::NextQuestion(const std::string& session_id,
                                                            size_t question) {
  std::lock_guard<std::mutex> lock(mu_);
  return NextQuestionLocked(session_id, question);
}

absl::StatusOr<QuestionPayload> SurveyService::NextQuestionLocked(const std::string& session_id,
                                                                  size_t question) {
  INTPRIV_ASSIGN_OR_RETURN(Session * s, FindSession(session_id));
  INTPRIV_ASSIGN_OR_RETURN(const QuestionDef* q, FindQuestion(s->survey_id, question));
  if (s->closed) return FailedPrecondition("SessionClosed", "session is closed");
  QuestionState& qs = s->questions[question];
  if (qs.done) return FailedPrecondition("QuestionDone", "question already answered");

  if (q->progressive()) {
    if (qs.progressive && qs.progressive->pending()) {
      return Payload(*s, question, *qs.pending_issue, &*qs.progressive->pending());
    }
    if (qs.progressive) return FailedPrecondition("RoundNotReady", "no round is pending");
    INTPRIV_ASSIGN_OR_RETURN(ProgressiveSession flow,
                             ProgressiveSession::Start(q->lo, q->hi, q->mechanism));
    Rng rng(DeriveSeed(s->seed, {question, 1, kDrawAnchors}));
    INTPRIV_ASSIGN_OR_RETURN(ProgressiveQuestion pq, flow.Begin(rng));
    const uint64_t issue = s->next_issue;
    // Progressive choices cut the bounded domain, so they are logged as a
    // general partition of it.
    json e = IssuedEvent(*s, question, pq.round, issue, pq.anchors, Partition());
    e["topology"] = "domain";
    e["ranges"] = json::array();
    for (const Range& r : pq.choices) e["ranges"].push_back(RangeToJson(r));
    INTPRIV_RETURN_IF_ERROR(Emit(std::move(e)));
    ++s->next_issue;
    qs.progressive = std::move(flow);
    qs.pending_issue = issue;
    return Payload(*s, question, issue, &*qs.progressive->pending());
  }

  if (qs.one_shot.issue) return Payload(*s, question, *qs.one_shot.issue, nullptr);
  Rng rng(DeriveSeed(s->seed, {question, 1, kDrawAnchors}));
  INTPRIV_ASSIGN_OR_RETURN(DrawnPartition d, DrawPartition(q->mechanism, rng));
  const uint64_t issue = s->next_issue;
  INTPRIV_RETURN_IF_ERROR(Emit(IssuedEvent(*s, question, 1, issue, d.anchors, d.partition)));
  ++s->next_issue;
  qs.one_shot.issue = issue;
  qs.one_shot.anchors = std::move(d.anchors);
  qs.one_shot.partition = std::move(d.partition);
  qs.pending_issue = issue;
  return Payload(*s, question, issue, nullptr);
}

absl::StatusOr<AnswerResult> SurveyService::SubmitAnswer(const std::string& session_id,
                                                         size_t question, const Answer& answer) {
  std::lock_guard<std::mutex> lock(mu_);
  return SubmitAnswerLocked(session_id, question, answer);
}

absl::StatusOr<AnswerResult> SurveyService::SubmitAnswerLocked(const std::string& session_id,
                                                               size_t question,
                                                               const Answer& answer) {
  INTPRIV_ASSIGN_OR_RETURN(Session * s, FindSession(session_id));
  INTPRIV_ASSIGN_OR_RETURN(const QuestionDef* q, FindQuestion(s->survey_id, question));
  QuestionState& qs = s->questions[question];
  if (!replaying_ && qs.answered_issue && answer.issue == *qs.answered_issue) {
    if (qs.last_answer && *qs.last_answer == answer) return *qs.last_result;
    return FailedPrecondition("StaleQuestion", "a different answer was already recorded");
  }
  if (s->closed) return FailedPrecondition("SessionClosed", "session is closed");
  if (qs.done) return FailedPrecondition("QuestionDone", "question already answered");
  if (!qs.pending_issue) return FailedPrecondition("RoundNotReady", "no question was issued");
  if (answer.issue != *qs.pending_issue) {
    return FailedPrecondition("StaleQuestion",
                              absl::StrCat("answer refers to issue ", answer.issue,
                                           ", the pending question is issue ", *qs.pending_issue));
  }
  // Shape of the answer.
  if (answer.opt_out) {
    if (!q->allow_opt_out) return ValidationError("opt_out", "this question has no opt-out");
    if (answer.choice || answer.exact) {
      return ValidationError("opt_out", "opt-out excludes choice and exact");
    }
  } else if (!answer.choice) {
    return ValidationError("choice", "a choice or opt-out is required");
  }
  if (answer.exact && !q->allow_exact) {
    return ValidationError("exact", "this question does not take exact values");
  }
  if (answer.exact && !std::isfinite(*answer.exact)) {
    return ValidationError("exact", "must be finite");
  }

  const uint64_t issue = *qs.pending_issue;
  AnswerResult result;
  json event = {{"type", "AnswerRecorded"}, {"session_id", s->id}, {"question", question},
                {"issue", issue},           {"choice", nullptr},   {"exact", nullptr},
                {"opt_out", answer.opt_out}, {"coverage", nullptr}, {"w", nullptr}};
  if (answer.choice) event["choice"] = *answer.choice;
  if (answer.exact) event["exact"] = *answer.exact;
  std::vector<json> follow_ups;

  std::optional<ProgressiveSession> flow;
  OneShot one_shot = qs.one_shot;
  std::optional<uint64_t> next_pending;
  if (q->progressive()) {
    flow = *qs.progressive;
    const int round = flow->pending()->round;
    event["round"] = round;
    if (answer.choice && (*answer.choice < 1 || *answer.choice > flow->pending()->choices.size())) {
      return ValidationError("choice", "choice index out of range");
    }
    Rng rng(DeriveSeed(s->seed, {question, static_cast<uint64_t>(round) + 1, kDrawAnchors}));
    INTPRIV_ASSIGN_OR_RETURN(
        ProgressiveSession::StepResult step,
        flow->Step(answer.opt_out ? ProgressiveAnswer::OptOut()
                                  : ProgressiveAnswer::Choose(*answer.choice),
                   rng));
    if (step.status == ProgressiveStatus::kActive) {
      result.outcome = AnswerOutcome::kNextRound;
      next_pending = s->next_issue;
      json e = IssuedEvent(*s, question, step.next->round, *next_pending, step.next->anchors,
                           Partition());
      e["topology"] = "domain";
      e["ranges"] = json::array();
      for (const Range& r : step.next->choices) e["ranges"].push_back(RangeToJson(r));
      follow_ups.push_back(std::move(e));
    } else {
      result.outcome = step.status == ProgressiveStatus::kDone ? AnswerOutcome::kQuestionDone
                                                               : AnswerOutcome::kNullResponse;
    }
  } else {
    event["round"] = 1;
    if (answer.opt_out) {
      one_shot.record = NullRecord{};
      result.outcome = AnswerOutcome::kNullResponse;
    } else {
      const Partition& p = *one_shot.partition;
      if (*answer.choice < 1 || *answer.choice > p.size()) {
        return ValidationError("choice", "choice index out of range");
      }
      auto rec = PrivatizedRecord::Make(one_shot.anchors, p, *answer.choice, answer.exact);
      if (!rec.ok()) {
        if (ErrorKind(rec.status()) == "FidelityViolation") return rec.status();
        return WithField(rec.status(), "choice");
      }
      result.outcome = AnswerOutcome::kQuestionDone;
      one_shot.record = *rec;
      if (q->selective()) {
        const SelectiveParams& sp = *q->mechanism.selective();
        const double cov = rec->exact() ? 0.0 : sp.prior.Mass(rec->chosen_range());
        Rng gate(DeriveSeed(s->seed, {question, 1, kDrawGate}));
        const bool w = gate.Bernoulli(sp.rho);
        event["coverage"] = cov;
        event["w"] = w;
        one_shot.coverage = cov;
        if (!(w && cov >= sp.tau)) {
          one_shot.record = NullRecord{};
          result.outcome = AnswerOutcome::kNullResponse;
        }
      }
    }
  }
  event["outcome"] = OutcomeName(result.outcome);

  // Does this answer finish the session?
  bool all_done = result.outcome != AnswerOutcome::kNextRound;
  for (size_t k = 0; all_done && k < s->questions.size(); ++k) {
    if (k != question && !s->questions[k].done) all_done = false;
  }
  if (all_done) follow_ups.push_back({{"type", "SessionClosed"}, {"session_id", s->id},
                                      {"reason", "completed"}});

  INTPRIV_RETURN_IF_ERROR(Emit(std::move(event)));
  for (json& e : follow_ups) INTPRIV_RETURN_IF_ERROR(Emit(std::move(e)));

  // Commit.
  qs.answered_issue = issue;
  qs.last_answer = answer;
  qs.pending_issue.reset();
  if (flow) qs.progressive = std::move(flow);
  qs.one_shot = std::move(one_shot);
  if (next_pending) {
    qs.pending_issue = next_pending;
    s->next_issue = *next_pending + 1;
    result.next = Payload(*s, question, *next_pending, &*qs.progressive->pending());
  } else {
    qs.done = true;
  }
  if (all_done) {
    s->closed = true;
    s->close_reason = "completed";
    result.session_closed = true;
  }
  qs.last_result = result;
  return result;
}

absl::Status SurveyService::CloseSession(const std::string& session_id) {
  std::lock_guard<std::mutex> lock(mu_);
  return CloseSessionLocked(session_id, "abandoned");
}

absl::Status SurveyService::CloseSessionLocked(const std::string& session_id,
                                               const std::string& reason) {
  INTPRIV_ASSIGN_OR_RETURN(Session * s, FindSession(session_id));
  if (s->closed) return FailedPrecondition("SessionClosed", "session is already closed");
  if (reason != "abandoned") {
    return InvalidArgument("InvalidArgument", "only abandonment closes a session explicitly");
  }
  INTPRIV_RETURN_IF_ERROR(
      Emit({{"type", "SessionClosed"}, {"session_id", s->id}, {"reason", reason}}));
  s->closed = true;
  s->close_reason = reason;
  for (QuestionState& qs : s->questions) {
    qs.pending_issue.reset();
    if (qs.progressive && qs.progressive->status() == ProgressiveStatus::kActive) {
      qs.progressive->Abandon();
      qs.abandoned = true;
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<WireRecord>> SurveyService::ExportLocked(const std::string& survey_id,
                                                                    size_t question,
                                                                    RoundSelection rounds) const {
  INTPRIV_ASSIGN_OR_RETURN(const QuestionDef* q, FindQuestion(survey_id, question));
  std::vector<WireRecord> out;
  for (const std::string& sid : session_order_) {
    const Session& s = sessions_.at(sid);
    if (s.survey_id != survey_id) continue;
    const QuestionState& qs = s.questions[question];
    if (!q->progressive()) {
      if (qs.done && qs.one_shot.record) out.push_back(*qs.one_shot.record);
      continue;
    }
    if (!qs.progressive) continue;
    const ProgressiveSession& flow = *qs.progressive;
    if (flow.status() == ProgressiveStatus::kActive) continue;
    if (qs.abandoned && flow.round() == 0) continue;
    if (rounds == RoundSelection::kFirst) {
      if (!flow.history().empty()) {
        out.push_back(flow.history().front());
      } else {
        out.push_back(NullRecord{});
      }
      continue;
    }
    INTPRIV_ASSIGN_OR_RETURN(WireRecord r, flow.Collected());
    if (qs.abandoned) {
      if (auto* p = std::get_if<PrivatizedRecord>(&r)) r = p->WithMeta({{"partial", true}});
    }
    out.push_back(std::move(r));
  }
  return out;
}

absl::StatusOr<std::vector<WireRecord>> SurveyService::ExportRecords(const std::string& survey_id,
                                                                     size_t question,
                                                                     RoundSelection rounds) const {
  std::lock_guard<std::mutex> lock(mu_);
  return ExportLocked(survey_id, question, rounds);
}

absl::StatusOr<std::string> SurveyService::ExportJsonLines(const std::string& survey_id,
                                                           size_t question,
                                                           RoundSelection rounds) const {
  INTPRIV_ASSIGN_OR_RETURN(std::vector<WireRecord> records,
                           ExportRecords(survey_id, question, rounds));
  std::string out;
  for (const WireRecord& r : records) absl::StrAppend(&out, ToJsonLine(r), "\n");
  return out;
}

absl::StatusOr<EstimateResult> SurveyService::Estimate(const std::string& survey_id,
                                                       size_t question,
                                                       const EstimateOptions& opts) const {
  std::vector<WireRecord> records;
  std::optional<QuestionDef> q;
  std::vector<double> gate_coverage;
  {
    std::lock_guard<std::mutex> lock(mu_);
    INTPRIV_ASSIGN_OR_RETURN(const QuestionDef* def, FindQuestion(survey_id, question));
    q = *def;
    INTPRIV_ASSIGN_OR_RETURN(records, ExportLocked(survey_id, question, opts.rounds));
    for (const std::string& sid : session_order_) {
      const Session& s = sessions_.at(sid);
      if (s.survey_id != survey_id) continue;
      const auto& c = s.questions[question].one_shot.coverage;
      if (c) gate_coverage.push_back(*c);
    }
  }
  INTPRIV_ASSIGN_OR_RETURN(EstimateResult out, EstimateFromRecords(records, *q, opts));
  if (q->selective()) {
    const SelectiveParams& sp = *q->mechanism.selective();
    const size_t hits = static_cast<size_t>(
        std::count_if(gate_coverage.begin(), gate_coverage.end(),
                      [&](double c) { return c >= sp.tau; }));
    const double p = gate_coverage.empty() ? 0.0 : double(hits) / gate_coverage.size();
    out.selective = json{{"tau", sp.tau},
                         {"rho", sp.rho},
                         {"answered", gate_coverage.size()},
                         {"p_coverage_at_least_tau", p},
                         {"rho_within_bound", sp.rho <= p}};
  }
  return out;
}

json SurveyService::StateJson() const {
  std::lock_guard<std::mutex> lock(mu_);
  json out = json::array();
  for (const std::string& sid : session_order_) {
    const Session& s = sessions_.at(sid);
    json qs = json::array();
    for (const QuestionState& q : s.questions) {
      json j = {{"done", q.done}, {"abandoned", q.abandoned}};
      j["pending_issue"] = q.pending_issue ? json(*q.pending_issue) : json(nullptr);
      if (q.progressive) {
        j["status"] = static_cast<int>(q.progressive->status());
        j["round"] = q.progressive->round();
        j["current_range"] = RangeToJson(q.progressive->current_range());
        json hist = json::array();
        for (const PrivatizedRecord& r : q.progressive->history()) hist.push_back(r.ToJson());
        j["history"] = std::move(hist);
      }
      if (q.one_shot.issue) j["anchors"] = q.one_shot.anchors;
      if (q.one_shot.record) j["record"] = ToJsonLine(*q.one_shot.record);
      qs.push_back(std::move(j));
    }
    out.push_back({{"session_id", s.id},
                   {"survey_id", s.survey_id},
                   {"closed", s.closed},
                   {"close_reason", s.close_reason},
                   {"next_issue", s.next_issue},
                   {"questions", std::move(qs)}});
  }
  return out;
}

}  // namespace intpriv
