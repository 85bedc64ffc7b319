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

// The privatized datum: realized anchors, the partition they induce, the
// index of the range holding the raw value and, when the value fell in an
// acceptable range, the value itself.
//
// JSON-lines wire format, one record per line:
//   {"schema":1,"anchors":[...],"topology":"canonical"|"ring"|"general",
//    "ranges":[[[lo|null,hi|null],...],...],"choice":i,"exact":x|null,
//    "features":[...]|null,"meta":{...}}
// A null endpoint is -inf in lo position and +inf in hi position. Suppressed
// collections are written as {"schema":1,"null":true,"meta":{...}}.

#ifndef INTPRIV_CORE_RECORD_H_
#define INTPRIV_CORE_RECORD_H_

#include <istream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "intpriv/core/range.h"
#include "json.hpp"

namespace intpriv {

inline constexpr int kWireSchemaVersion = 1;

class PrivatizedRecord {
 public:
  // Validates choice in [1, m] and that `exact` (if any) lies in the chosen
  // range. Fails with FidelityViolation otherwise.
  static absl::StatusOr<PrivatizedRecord> Make(
      std::vector<double> anchors, Partition partition, size_t choice,
      std::optional<double> exact = std::nullopt,
      std::optional<std::vector<double>> features = std::nullopt,
      nlohmann::json meta = nlohmann::json::object());

  const std::vector<double>& anchors() const { return anchors_; }
  const Partition& partition() const { return partition_; }
  size_t choice() const { return choice_; }  // 1-based
  const Range& chosen_range() const { return partition_.range(choice_); }
  const std::optional<double>& exact() const { return exact_; }
  const std::optional<std::vector<double>>& features() const { return features_; }
  const nlohmann::json& meta() const { return meta_; }

  // The set of values consistent with this record: the exact point, else
  // the chosen range.
  bool IsConsistentWith(double y) const {
    return exact_ ? *exact_ == y : chosen_range().Contains(y);
  }

  PrivatizedRecord WithFeatures(std::vector<double> features) const;
  PrivatizedRecord WithMeta(nlohmann::json meta) const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<PrivatizedRecord> FromJson(const nlohmann::json& j);

  bool operator==(const PrivatizedRecord&) const = default;

 private:
  PrivatizedRecord() = default;

  std::vector<double> anchors_;
  Partition partition_;
  size_t choice_ = 1;
  std::optional<double> exact_;
  std::optional<std::vector<double>> features_;
  nlohmann::json meta_ = nlohmann::json::object();
};

struct NullRecord {
  nlohmann::json meta = nlohmann::json::object();
  bool operator==(const NullRecord&) const = default;
};

using WireRecord = std::variant<PrivatizedRecord, NullRecord>;

nlohmann::json RangeToJson(const Range& r);
absl::StatusOr<Range> RangeFromJson(const nlohmann::json& j);

// The "topology" and "ranges" fields of the wire format.
nlohmann::json PartitionToJson(const Partition& p);
// Rebuilds a partition from anchors, a topology name and ranges. Canonical
// and ring partitions must match the ones the anchors induce.
absl::StatusOr<Partition> PartitionFromJson(const std::vector<double>& anchors,
                                            const nlohmann::json& topology,
                                            const nlohmann::json& ranges);

std::string ToJsonLine(const WireRecord& record);
absl::StatusOr<WireRecord> ParseJsonLine(const std::string& line);
// Parses a whole stream; errors carry the 1-based line number. Blank lines
// are skipped.
absl::StatusOr<std::vector<WireRecord>> ParseJsonLines(std::istream& in);
// Keeps only the non-null records.
std::vector<PrivatizedRecord> NonNull(const std::vector<WireRecord>& records);

}  // namespace intpriv

#endif  // INTPRIV_CORE_RECORD_H_
