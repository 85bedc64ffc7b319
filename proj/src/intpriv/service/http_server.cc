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

#include "intpriv/service/http_server.h"

#include <charconv>

#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "intpriv/core/errors.h"
#include "intpriv/service/survey.h"

namespace intpriv {

using nlohmann::json;

namespace {

constexpr char kJson[] = "application/json";

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void Fail(httplib::Response& res, const absl::Status& status) {
  Reply(res, HttpStatusFor(status), ErrorBody(status));
}

absl::StatusOr<json> Body(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return InvalidArgument("ParseError", "request body is not valid JSON");
  return j;
}

// Route patterns only admit digits here, so the only failure is overflow.
absl::StatusOr<size_t> Index(const std::string& s) {
  size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    return MakeError(absl::StatusCode::kNotFound, "NotFound", absl::StrCat("question ", s));
  }
  return v;
}

absl::StatusOr<RoundSelection> Rounds(const std::string& s) {
  if (s.empty() || s == "all") return RoundSelection::kAll;
  if (s == "first") return RoundSelection::kFirst;
  return ValidationError("rounds", "must be first or all");
}

}  // namespace

int HttpStatusFor(const absl::Status& status) {
  const std::string kind = ErrorKind(status);
  if (kind == "NotFound") return 404;
  if (kind == "ValidationError" || kind == "FidelityViolation" || kind == "ParseError") return 400;
  if (kind == "SessionClosed" || kind == "QuestionDone" || kind == "RoundNotReady" ||
      kind == "StaleQuestion") {
    return 409;
  }
  if (kind == "NoData") return 422;
  if (status.code() == absl::StatusCode::kInvalidArgument) return 400;
  return 500;
}

json ErrorBody(const absl::Status& status) {
  std::string code = ErrorKind(status);
  std::string message(status.message());
  if (code.empty()) {
    code = "InternalError";
  } else {
    message = message.substr(code.size() + 2);
  }
  json j = {{"schema", kApiSchemaVersion}, {"code", code}, {"message", message}};
  if (auto field = ErrorField(status)) j["field"] = *field;
  return j;
}

HttpServer::HttpServer(SurveyService* service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  Routes();
}

HttpServer::~HttpServer() { Stop(); }

absl::StatusOr<int> HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) return absl::UnavailableError(absl::StrCat("cannot bind ", host));
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    return absl::UnavailableError(absl::StrCat("cannot bind ", host, ":", port));
  }
  return port;
}

absl::Status HttpServer::Serve() {
  if (!server_->listen_after_bind()) return absl::UnavailableError("server stopped with an error");
  return absl::OkStatus();
}

void HttpServer::Stop() {
  if (server_) server_->stop();
}

void HttpServer::Routes() {
  httplib::Server& s = *server_;
  SurveyService* svc = service_;
  // The respondent UI is served from elsewhere.
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Post("/surveys", [svc](const httplib::Request& req, httplib::Response& res) {
    auto body = Body(req);
    if (!body.ok()) return Fail(res, body.status());
    auto id = svc->CreateSurvey(*body);
    if (!id.ok()) return Fail(res, id.status());
    Reply(res, 201, {{"schema", kApiSchemaVersion}, {"id", *id}});
  });

  s.Get(R"(/surveys/([^/]+))", [svc](const httplib::Request& req, httplib::Response& res) {
    auto def = svc->GetSurvey(req.matches[1]);
    if (!def.ok()) return Fail(res, def.status());
    Reply(res, 200, def->ToJson());
  });

  s.Post(R"(/surveys/([^/]+)/sessions)",
         [svc](const httplib::Request& req, httplib::Response& res) {
           auto sid = svc->StartSession(req.matches[1]);
           if (!sid.ok()) return Fail(res, sid.status());
           Reply(res, 201, {{"schema", kApiSchemaVersion}, {"session_id", *sid}});
         });

  s.Get(R"(/sessions/([^/]+)/questions/(\d+))",
        [svc](const httplib::Request& req, httplib::Response& res) {
          auto qi = Index(req.matches[2]);
          if (!qi.ok()) return Fail(res, qi.status());
          auto p = svc->NextQuestion(req.matches[1], *qi);
          if (!p.ok()) return Fail(res, p.status());
          Reply(res, 200, p->ToJson());
        });

  s.Post(R"(/sessions/([^/]+)/questions/(\d+)/answer)",
         [svc](const httplib::Request& req, httplib::Response& res) {
           auto qi = Index(req.matches[2]);
           if (!qi.ok()) return Fail(res, qi.status());
           auto body = Body(req);
           if (!body.ok()) return Fail(res, body.status());
           auto answer = Answer::FromJson(*body);
           if (!answer.ok()) return Fail(res, answer.status());
           auto r = svc->SubmitAnswer(req.matches[1], *qi, *answer);
           if (!r.ok()) return Fail(res, r.status());
           Reply(res, 200, r->ToJson());
         });

  s.Post(R"(/sessions/([^/]+)/close)", [svc](const httplib::Request& req, httplib::Response& res) {
    const absl::Status st = svc->CloseSession(req.matches[1]);
    if (!st.ok()) return Fail(res, st);
    Reply(res, 200, {{"schema", kApiSchemaVersion}, {"closed", true}});
  });

  s.Get(R"(/surveys/([^/]+)/questions/(\d+)/export)",
        [svc](const httplib::Request& req, httplib::Response& res) {
          auto qi = Index(req.matches[2]);
          if (!qi.ok()) return Fail(res, qi.status());
          auto rounds = Rounds(req.get_param_value("rounds"));
          if (!rounds.ok()) return Fail(res, rounds.status());
          auto lines = svc->ExportJsonLines(req.matches[1], *qi, *rounds);
          if (!lines.ok()) return Fail(res, lines.status());
          res.status = 200;
          res.set_content(*lines, "application/x-ndjson");
        });

  const auto estimate = [svc](const httplib::Request& req, httplib::Response& res) {
    auto qi = Index(req.matches[2]);
    if (!qi.ok()) return Fail(res, qi.status());
    EstimateOptions opts;
    std::string rounds_text = req.get_param_value("rounds");
    if (req.method == "POST" && !req.body.empty()) {
      auto body = Body(req);
      if (!body.ok()) return Fail(res, body.status());
      if (body->contains("rounds") && (*body)["rounds"].is_string()) {
        rounds_text = (*body)["rounds"].get<std::string>();
      }
      if (body->contains("reference") && !(*body)["reference"].is_null()) {
        auto ref = StepCdfFromJson((*body)["reference"]);
        if (!ref.ok()) return Fail(res, ref.status());
        opts.reference = *std::move(ref);
      }
    }
    auto rounds = Rounds(rounds_text);
    if (!rounds.ok()) return Fail(res, rounds.status());
    opts.rounds = *rounds;
    auto est = svc->Estimate(req.matches[1], *qi, opts);
    if (!est.ok()) return Fail(res, est.status());
    Reply(res, 200, est->ToJson());
  };
  s.Get(R"(/surveys/([^/]+)/questions/(\d+)/estimate)", estimate);
  s.Post(R"(/surveys/([^/]+)/questions/(\d+)/estimate)", estimate);
}

}  // namespace intpriv
