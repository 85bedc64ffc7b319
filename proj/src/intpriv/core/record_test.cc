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

#include <sstream>
#include <vector>

#include "gtest/gtest.h"
#include "intpriv/core/errors.h"

namespace intpriv {
namespace {

PrivatizedRecord MakeRecord(std::vector<double> anchors, bool ring, size_t choice,
                            std::optional<double> exact = std::nullopt) {
  auto p = ring ? Partition::Ring(anchors) : Partition::Canonical(anchors);
  return *PrivatizedRecord::Make(anchors, *p, choice, exact);
}

TEST(RecordTest, RejectsFidelityViolation) {
  const std::vector<double> anchors = {0, 100};
  auto p = Partition::Canonical(anchors);
  auto r = PrivatizedRecord::Make(anchors, *p, 2, 200.0);
  EXPECT_EQ(ErrorKind(r.status()), "FidelityViolation");
  EXPECT_FALSE(PrivatizedRecord::Make(anchors, *p, 4).ok());
  EXPECT_FALSE(PrivatizedRecord::Make(anchors, *p, 0).ok());
}

TEST(RecordTest, JsonRoundTrip) {
  for (const auto& rec : {MakeRecord({0, 10}, true, 1), MakeRecord({41, 85}, false, 2),
                          MakeRecord({59, 61}, false, 2, 60.5)}) {
    const std::string line = ToJsonLine(rec);
    auto back = ParseJsonLine(line);
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(std::get<PrivatizedRecord>(*back), rec);
    EXPECT_EQ(ToJsonLine(*back), line);
  }
}

TEST(RecordTest, WireFormatShape) {
  const auto j = MakeRecord({0, 10}, true, 1).ToJson();
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["topology"], "ring");
  EXPECT_TRUE(j["ranges"][0][0][0].is_null());
  EXPECT_EQ(j["ranges"][0][0][1], 0.0);
  EXPECT_TRUE(j["ranges"][0][1][1].is_null());
  EXPECT_TRUE(j["exact"].is_null());
}

TEST(RecordTest, ParserRejectsTamperedRecords) {
  auto j = MakeRecord({0, 10}, false, 2).ToJson();
  j["exact"] = 11.0;
  EXPECT_EQ(ErrorKind(PrivatizedRecord::FromJson(j).status()), "FidelityViolation");
  j = MakeRecord({0, 10}, false, 2).ToJson();
  j["ranges"][1][0][1] = 9.0;
  EXPECT_FALSE(PrivatizedRecord::FromJson(j).ok());
  j = MakeRecord({0, 10}, false, 2).ToJson();
  j["schema"] = 2;
  EXPECT_FALSE(PrivatizedRecord::FromJson(j).ok());
}

TEST(RecordTest, JsonLinesWithNullsAndLineNumbers) {
  std::stringstream ok;
  ok << ToJsonLine(MakeRecord({1}, false, 1)) << "\n\n"
     << ToJsonLine(NullRecord{{{"session", "s1"}}}) << "\n";
  auto parsed = ParseJsonLines(ok);
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(parsed->size(), 2u);
  EXPECT_EQ(NonNull(*parsed).size(), 1u);

  std::stringstream bad;
  bad << ToJsonLine(MakeRecord({1}, false, 1)) << "\n{not json\n";
  auto err = ParseJsonLines(bad);
  ASSERT_FALSE(err.ok());
  EXPECT_NE(err.status().message().find("line 2"), absl::string_view::npos);
}

TEST(RecordTest, ConsistencyUsesExactWhenPresent) {
  const auto rec = MakeRecord({59, 61}, false, 2, 60.5);
  EXPECT_TRUE(rec.IsConsistentWith(60.5));
  EXPECT_FALSE(rec.IsConsistentWith(60.0));
  EXPECT_TRUE(MakeRecord({59, 61}, false, 2).IsConsistentWith(60.0));
}

}  // namespace
}  // namespace intpriv
