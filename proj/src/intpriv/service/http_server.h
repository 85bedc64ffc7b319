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

// HTTP+JSON front end of SurveyService.
//
//   POST /surveys                                   -> 201 {id}
//   GET  /surveys/{id}
//   POST /surveys/{id}/sessions                     -> 201 {session_id}
//   GET  /sessions/{sid}/questions/{qi}
//   POST /sessions/{sid}/questions/{qi}/answer
//   POST /sessions/{sid}/close
//   GET  /surveys/{id}/questions/{qi}/export        -> application/x-ndjson
//   GET  /surveys/{id}/questions/{qi}/estimate?rounds=first|all
//   POST /surveys/{id}/questions/{qi}/estimate      body {rounds?, reference?}
//
// Errors are {"schema":1,"code","message","field"?}.

#ifndef INTPRIV_SERVICE_HTTP_SERVER_H_
#define INTPRIV_SERVICE_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "absl/status/status.h"
#include "intpriv/service/survey_service.h"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace intpriv {

// HTTP status for a service error kind.
int HttpStatusFor(const absl::Status& status);
nlohmann::json ErrorBody(const absl::Status& status);

class HttpServer {
 public:
  explicit HttpServer(SurveyService* service);
  ~HttpServer();

  // Binds; port 0 picks a free port. Returns the bound port.
  absl::StatusOr<int> Bind(const std::string& host, int port);
  // Serves until Stop(); call after Bind.
  absl::Status Serve();
  void Stop();

 private:
  void Routes();

  SurveyService* service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace intpriv

#endif  // INTPRIV_SERVICE_HTTP_SERVER_H_
