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

#include <thread>

#include "gtest/gtest.h"
#include "httplib.h"
#include "intpriv/core/errors.h"
#include "intpriv/service/survey.h"

namespace intpriv {
namespace {

using nlohmann::json;

json OneShotSurvey() {
  json mech = {{"schema", 1},
               {"topology", "canonical"},
               {"ranges", 2},
               {"sampler", {{"law", {{"kind", "uniform"}, {"a", 0}, {"b", 100}}}, {"count", 1}}},
               {"acceptable", nullptr},
               {"selective", nullptr},
               {"progressive", nullptr},
               {"transform", nullptr}};
  return {{"schema", 1},
          {"title", "http"},
          {"questions",
           {{{"prompt", "Age?"},
             {"domain", {0, 100}},
             {"mechanism", mech},
             {"allow_exact", true},
             {"allow_opt_out", true}}}}};
}

class HttpServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SurveyService::Options opts;
    opts.seed = 3;
    service_ = *SurveyService::Create(nullptr, opts);
    server_ = std::make_unique<HttpServer>(service_.get());
    auto port = server_->Bind("127.0.0.1", 0);
    ASSERT_TRUE(port.ok()) << port.status();
    thread_ = std::thread([this] { (void)server_->Serve(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", *port);
  }
  void TearDown() override {
    server_->Stop();
    thread_.join();
  }

  std::pair<int, json> Post(const std::string& path, const json& body) {
    auto r = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(r) << path;
    if (!r) return {0, nullptr};
    return {r->status, json::parse(r->body, nullptr, false)};
  }
  std::pair<int, std::string> Get(const std::string& path) {
    auto r = client_->Get(path);
    EXPECT_TRUE(r) << path;
    if (!r) return {0, ""};
    return {r->status, r->body};
  }

  std::unique_ptr<SurveyService> service_;
  std::unique_ptr<HttpServer> server_;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(HttpServerTest, FullRespondentFlow) {
  auto [st, created] = Post("/surveys", OneShotSurvey());
  ASSERT_EQ(st, 201);
  const std::string id = created["id"];
  auto [st2, def] = Get("/surveys/" + id);
  EXPECT_EQ(st2, 200);
  EXPECT_EQ(json::parse(def)["title"], "http");

  auto [st3, session] = Post("/surveys/" + id + "/sessions", json::object());
  ASSERT_EQ(st3, 201);
  const std::string sid = session["session_id"];
  auto [st4, qtext] = Get("/sessions/" + sid + "/questions/0");
  ASSERT_EQ(st4, 200);
  const json q = json::parse(qtext);
  EXPECT_EQ(q["choices"].size(), 2u);
  EXPECT_EQ(q["schema"], 1);

  const json answer = {{"schema", 1}, {"issue", q["issue"]}, {"choice", 2}};
  auto [st5, result] = Post("/sessions/" + sid + "/questions/0/answer", answer);
  ASSERT_EQ(st5, 200);
  EXPECT_EQ(result["outcome"], "question_done");
  EXPECT_EQ(result["session_closed"], true);

  auto [st6, ndjson] = Get("/surveys/" + id + "/questions/0/export");
  EXPECT_EQ(st6, 200);
  EXPECT_EQ(ndjson, *service_->ExportJsonLines(id, 0));
  auto [st7, est] = Get("/surveys/" + id + "/questions/0/estimate?rounds=first");
  EXPECT_EQ(st7, 200);
  EXPECT_EQ(json::parse(est)["coverage"]["prior"], "NPMLE-plug-in");

  auto [st8, est2] = Post("/surveys/" + id + "/questions/0/estimate",
                          {{"rounds", "all"}, {"reference", {{0.0, 0.5}, {100.0, 1.0}}}});
  EXPECT_EQ(st8, 200);
  EXPECT_TRUE(est2["energy_distance"].is_number());
}

TEST_F(HttpServerTest, ErrorsMapToStatusCodes) {
  auto [st, body] = Post("/surveys", {{"schema", 1}, {"title", "x"}, {"questions", json::array()}});
  EXPECT_EQ(st, 400);
  EXPECT_EQ(body["code"], "ValidationError");
  EXPECT_EQ(body["field"], "questions");

  auto bad = client_->Post("/surveys", "{nope", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(json::parse(bad->body)["code"], "ParseError");

  EXPECT_EQ(Get("/surveys/none").first, 404);
  EXPECT_EQ(Get("/sessions/none/questions/0").first, 404);

  const std::string id = Post("/surveys", OneShotSurvey()).second["id"];
  EXPECT_EQ(Get("/surveys/" + id + "/questions/0/estimate").first, 422);
  EXPECT_EQ(Get("/surveys/" + id + "/questions/0/estimate?rounds=some").first, 400);
  const std::string sid = Post("/surveys/" + id + "/sessions", json::object()).second["session_id"];
  auto [st_nr, nr] = Post("/sessions/" + sid + "/questions/0/answer",
                          {{"schema", 1}, {"issue", 1}, {"choice", 1}});
  EXPECT_EQ(st_nr, 409);
  EXPECT_EQ(nr["code"], "RoundNotReady");
  const json q = json::parse(Get("/sessions/" + sid + "/questions/0").second);
  auto [st_fv, fv] = Post("/sessions/" + sid + "/questions/0/answer",
                          {{"schema", 1}, {"issue", q["issue"]}, {"choice", 1}, {"exact", 200}});
  EXPECT_EQ(st_fv, 400);
  EXPECT_EQ(fv["code"], "FidelityViolation");
  EXPECT_EQ(Post("/sessions/" + sid + "/close", json::object()).first, 200);
  auto [st_sc, sc] = Post("/sessions/" + sid + "/close", json::object());
  EXPECT_EQ(st_sc, 409);
  EXPECT_EQ(sc["code"], "SessionClosed");
  EXPECT_EQ(Get("/sessions/" + sid + "/questions/99999999999999999999999").first, 404);
}

TEST(HttpStatusTest, KindsMap) {
  EXPECT_EQ(HttpStatusFor(FailedPrecondition("NoData", "x")), 422);
  EXPECT_EQ(HttpStatusFor(FailedPrecondition("StaleQuestion", "x")), 409);
  EXPECT_EQ(HttpStatusFor(absl::InternalError("boom")), 500);
  const json body = ErrorBody(ValidationError("questions[0].domain", "bad"));
  EXPECT_EQ(body["code"], "ValidationError");
  EXPECT_EQ(body["message"], "questions[0].domain: bad");
  EXPECT_EQ(body["field"], "questions[0].domain");
}

}  // namespace
}  // namespace intpriv
