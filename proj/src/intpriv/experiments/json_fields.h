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

// Small helpers for reading experiment configs: optional keys overwrite
// defaults, unknown keys and type mismatches are ValidationErrors.

#ifndef INTPRIV_EXPERIMENTS_JSON_FIELDS_H_
#define INTPRIV_EXPERIMENTS_JSON_FIELDS_H_

#include <initializer_list>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"
#include "json.hpp"

namespace intpriv {

inline absl::Status ConfigError(absl::string_view field, absl::string_view detail) {
  return InvalidArgument("ValidationError", absl::StrCat(field, ": ", detail));
}

// Prefixes the detail of a "Kind: detail" error, e.g. with a parent key.
inline absl::Status WithPrefix(const absl::Status& status, absl::string_view prefix) {
  const std::string kind = ErrorKind(status);
  if (kind.empty()) return status;
  return MakeError(status.code(), kind,
                   absl::StrCat(prefix, status.message().substr(kind.size() + 2)));
}

inline absl::Status CheckKeys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) return ConfigError("config", "must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) return ConfigError(key, "unknown key");
  }
  return absl::OkStatus();
}

template <class T>
absl::Status ReadField(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return absl::OkStatus();
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    return ConfigError(key, e.what());
  }
  return absl::OkStatus();
}

}  // namespace intpriv

#endif  // INTPRIV_EXPERIMENTS_JSON_FIELDS_H_
