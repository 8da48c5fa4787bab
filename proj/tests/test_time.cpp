// Copyright 2026 The tempograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "tempograph/time.hpp"

using namespace tempograph;

namespace {

std::int64_t epoch_us(const char* s) {
  auto t = parse_timestamp(s);
  EXPECT_TRUE(t.has_value()) << s;
  return t ? t->time_since_epoch().count() : 0;
}

TEST(Timestamp, ParsesUtcDesignator) {
  EXPECT_EQ(epoch_us("1970-01-01T00:00:00Z"), 0);
  EXPECT_EQ(epoch_us("2020-01-01T00:00:00Z"), 1577836800LL * 1000000);
}

TEST(Timestamp, NormalisesOffsetsToUtc) {
  EXPECT_EQ(epoch_us("2020-01-01T02:00:00+02:00"), epoch_us("2020-01-01T00:00:00Z"));
  EXPECT_EQ(epoch_us("2019-12-31T19:30:00-04:30"), epoch_us("2020-01-01T00:00:00Z"));
  EXPECT_EQ(epoch_us("2020-01-01T02:00:00+0200"), epoch_us("2020-01-01T00:00:00Z"));
}

TEST(Timestamp, MissingOffsetIsUtc) {
  EXPECT_EQ(epoch_us("2020-01-01T00:00:00"), epoch_us("2020-01-01T00:00:00Z"));
  EXPECT_EQ(epoch_us("2020-01-01"), epoch_us("2020-01-01T00:00:00Z"));
}

TEST(Timestamp, FractionsKeepMicroseconds) {
  EXPECT_EQ(epoch_us("1970-01-01T00:00:00.5Z"), 500000);
  EXPECT_EQ(epoch_us("1970-01-01T00:00:00.546Z"), 546000);
  EXPECT_EQ(epoch_us("1970-01-01T00:00:00.123456789Z"), 123456);
}

TEST(Timestamp, BpicStyleTimestamp) {
  // 2011-10-01T00:38:44.546+02:00 is 2011-09-30T22:38:44.546Z.
  EXPECT_EQ(format_timestamp(*parse_timestamp("2011-10-01T00:38:44.546+02:00")), "2011-09-30T22:38:44.546Z");
}

TEST(Timestamp, RejectsGarbage) {
  for (const char* s : {"", "yesterday", "2020-13-01T00:00:00Z", "2020-02-30T00:00:00Z", "2020-01-01T25:00:00Z",
                        "2020-01-01T00:00:00Q", "2020-01-01T00:00:00.Z", "2020/01/01"}) {
    EXPECT_FALSE(parse_timestamp(s).has_value()) << s;
  }
}

TEST(Timestamp, FormatRoundTrips) {
  for (const char* s : {"2020-01-01T00:00:00Z", "2020-01-01T00:00:00.250Z", "1999-12-31T23:59:59.000001Z",
                        "2012-02-29T12:34:56.789Z"}) {
    auto t = parse_timestamp(s);
    ASSERT_TRUE(t);
    EXPECT_EQ(format_timestamp(*t), s);
    EXPECT_EQ(parse_timestamp(format_timestamp(*t)), t);
  }
}

TEST(Timestamp, SecondsConversions) {
  EXPECT_DOUBLE_EQ(to_seconds(std::chrono::microseconds(1500000)), 1.5);
  EXPECT_EQ(from_seconds(2.25).count(), 2250000);
  EXPECT_EQ(at_seconds(36) - at_seconds(29), std::chrono::microseconds(7000000));
}

}  // namespace
