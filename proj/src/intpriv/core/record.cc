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

#include "intpriv/core/record.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "intpriv/core/errors.h"

namespace intpriv {

using nlohmann::json;

absl::StatusOr<PrivatizedRecord> PrivatizedRecord::Make(
    std::vector<double> anchors, Partition partition, size_t choice,
    std::optional<double> exact, std::optional<std::vector<double>> features,
    json meta) {
  if (choice < 1 || choice > partition.size()) {
    return InvalidArgument("InvalidRecord",
                           absl::StrCat("choice ", choice, " outside [1, ",
                                        partition.size(), "]"));
  }
  if (exact) {
    if (!std::isfinite(*exact)) {
      return InvalidArgument("InvalidRecord", "exact value is not finite");
    }
    if (!partition.range(choice).Contains(*exact)) {
      return InvalidArgument(
          "FidelityViolation",
          absl::StrCat("exact value ", *exact, " is outside the chosen range ",
                       partition.range(choice).ToString()));
    }
  }
  if (features) {
    for (double f : *features) {
      if (!std::isfinite(f)) return InvalidArgument("InvalidRecord", "non-finite feature");
    }
  }
  if (!meta.is_object()) return InvalidArgument("InvalidRecord", "meta must be an object");
  PrivatizedRecord r;
  r.anchors_ = std::move(anchors);
  r.partition_ = std::move(partition);
  r.choice_ = choice;
  r.exact_ = exact;
  r.features_ = std::move(features);
  r.meta_ = std::move(meta);
  return r;
}

PrivatizedRecord PrivatizedRecord::WithFeatures(std::vector<double> features) const {
  PrivatizedRecord r = *this;
  r.features_ = std::move(features);
  return r;
}

PrivatizedRecord PrivatizedRecord::WithMeta(json meta) const {
  PrivatizedRecord r = *this;
  r.meta_ = std::move(meta);
  return r;
}

namespace {

json EndpointToJson(const ExtReal& x) {
  if (!x.is_finite()) return nullptr;
  return x.value();
}

absl::string_view TopologyName(Topology t) {
  switch (t) {
    case Topology::kCanonical:
      return "canonical";
    case Topology::kRing:
      return "ring";
    case Topology::kGeneral:
      break;
  }
  return "general";
}

absl::StatusOr<std::vector<double>> DoubleArray(const json& j, absl::string_view field) {
  if (!j.is_array()) {
    return InvalidArgument("ParseError", absl::StrCat(field, " must be an array"));
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const json& v : j) {
    if (!v.is_number()) {
      return InvalidArgument("ParseError", absl::StrCat(field, " must hold numbers"));
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

json RangeToJson(const Range& r) {
  json parts = json::array();
  for (const Interval& iv : r.parts()) {
    parts.push_back(json::array({EndpointToJson(iv.lo), EndpointToJson(iv.hi)}));
  }
  return parts;
}

absl::StatusOr<Range> RangeFromJson(const json& j) {
  if (!j.is_array()) return InvalidArgument("ParseError", "range must be an array");
  std::vector<Interval> parts;
  for (const json& p : j) {
    if (!p.is_array() || p.size() != 2) {
      return InvalidArgument("ParseError", "range part must be [lo, hi]");
    }
    const json& lo = p[0];
    const json& hi = p[1];
    if (!(lo.is_null() || lo.is_number()) || !(hi.is_null() || hi.is_number())) {
      return InvalidArgument("ParseError", "endpoints must be numbers or null");
    }
    parts.push_back({lo.is_null() ? ExtReal::NegInf() : ExtReal(lo.get<double>()),
                     hi.is_null() ? ExtReal::PosInf() : ExtReal(hi.get<double>())});
  }
  return Range::Make(std::move(parts));
}

json PartitionToJson(const Partition& p) {
  json ranges = json::array();
  for (const Range& r : p.ranges()) ranges.push_back(RangeToJson(r));
  return {{"topology", TopologyName(p.topology())}, {"ranges", std::move(ranges)}};
}

absl::StatusOr<Partition> PartitionFromJson(const std::vector<double>& anchors,
                                            const json& topology_json, const json& ranges_json) {
  if (!ranges_json.is_array()) return InvalidArgument("ParseError", "ranges must be an array");
  std::vector<Range> ranges;
  for (const json& rj : ranges_json) {
    INTPRIV_ASSIGN_OR_RETURN(Range r, RangeFromJson(rj));
    ranges.push_back(std::move(r));
  }
  if (!topology_json.is_string()) {
    return InvalidArgument("ParseError", "topology must be a string");
  }
  const std::string topology = topology_json.get<std::string>();
  if (topology == "canonical" || topology == "ring") {
    auto built = topology == "canonical" ? Partition::Canonical(anchors)
                                         : Partition::Ring(anchors);
    if (!built.ok()) return built.status();
    if (built->ranges() != ranges) {
      return InvalidArgument("ParseError",
                             "ranges do not match the partition induced by anchors");
    }
    return *std::move(built);
  }
  if (topology == "general") return Partition::FromRanges(std::move(ranges));
  return InvalidArgument("ParseError", absl::StrCat("unknown topology ", topology));
}

json PrivatizedRecord::ToJson() const {
  json p = PartitionToJson(partition_);
  json j;
  j["schema"] = kWireSchemaVersion;
  j["anchors"] = anchors_;
  j["topology"] = std::move(p["topology"]);
  j["ranges"] = std::move(p["ranges"]);
  j["choice"] = choice_;
  j["exact"] = exact_ ? json(*exact_) : json(nullptr);
  j["features"] = features_ ? json(*features_) : json(nullptr);
  j["meta"] = meta_;
  return j;
}

absl::StatusOr<PrivatizedRecord> PrivatizedRecord::FromJson(const json& j) {
  if (!j.is_object()) return InvalidArgument("ParseError", "record must be an object");
  if (!j.contains("schema") || j["schema"] != kWireSchemaVersion) {
    return InvalidArgument("ParseError", "unsupported or missing schema version");
  }
  for (const char* field : {"anchors", "topology", "ranges", "choice"}) {
    if (!j.contains(field)) {
      return InvalidArgument("ParseError", absl::StrCat("missing field ", field));
    }
  }
  INTPRIV_ASSIGN_OR_RETURN(std::vector<double> anchors,
                           DoubleArray(j["anchors"], "anchors"));
  INTPRIV_ASSIGN_OR_RETURN(Partition partition,
                           PartitionFromJson(anchors, j["topology"], j["ranges"]));
  if (!j["choice"].is_number_integer() || j["choice"].get<long long>() < 1) {
    return InvalidArgument("ParseError", "choice must be a positive integer");
  }
  const size_t choice = j["choice"].get<size_t>();
  std::optional<double> exact;
  if (j.contains("exact") && !j["exact"].is_null()) {
    if (!j["exact"].is_number()) return InvalidArgument("ParseError", "exact must be a number");
    exact = j["exact"].get<double>();
  }
  std::optional<std::vector<double>> features;
  if (j.contains("features") && !j["features"].is_null()) {
    INTPRIV_ASSIGN_OR_RETURN(features, DoubleArray(j["features"], "features"));
  }
  json meta = j.contains("meta") ? j["meta"] : json::object();
  return Make(std::move(anchors), std::move(partition), choice, exact,
              std::move(features), std::move(meta));
}

std::string ToJsonLine(const WireRecord& record) {
  if (const auto* r = std::get_if<PrivatizedRecord>(&record)) return r->ToJson().dump();
  const auto& n = std::get<NullRecord>(record);
  json j;
  j["schema"] = kWireSchemaVersion;
  j["null"] = true;
  j["meta"] = n.meta;
  return j.dump();
}

absl::StatusOr<WireRecord> ParseJsonLine(const std::string& line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return InvalidArgument("ParseError", "malformed JSON");
  if (j.is_object() && j.contains("null") && j["null"] == true) {
    if (j.value("schema", 0) != kWireSchemaVersion) {
      return InvalidArgument("ParseError", "unsupported or missing schema version");
    }
    return NullRecord{j.contains("meta") ? j["meta"] : json::object()};
  }
  INTPRIV_ASSIGN_OR_RETURN(PrivatizedRecord r, PrivatizedRecord::FromJson(j));
  return r;
}

absl::StatusOr<std::vector<WireRecord>> ParseJsonLines(std::istream& in) {
  std::vector<WireRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto parsed = ParseJsonLine(line);
    if (!parsed.ok()) {
      return absl::Status(parsed.status().code(),
                          absl::StrCat(parsed.status().message(), " (line ", line_no, ")"));
    }
    out.push_back(*std::move(parsed));
  }
  return out;
}

std::vector<PrivatizedRecord> NonNull(const std::vector<WireRecord>& records) {
  std::vector<PrivatizedRecord> out;
  for (const auto& r : records) {
    if (const auto* p = std::get_if<PrivatizedRecord>(&r)) out.push_back(*p);
  }
  return out;
}

}  // namespace intpriv
