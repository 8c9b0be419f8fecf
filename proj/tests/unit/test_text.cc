// Copyright 2026 The Retell Authors
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

#include "retell/text.h"

namespace retell::text {
namespace {

TEST(DecodeUtf8, RoundTripsMultibyte) {
  const std::string s = "caf\xC3\xA9 \xE2\x80\x99 \xF0\x9F\x98\x80";
  const std::u32string cps = DecodeUtf8(s);
  ASSERT_EQ(cps.size(), 8u);
  EXPECT_EQ(cps[3], U'é');
  EXPECT_EQ(cps[7], U'\U0001F600');
  EXPECT_EQ(EncodeUtf8(cps), s);
}

TEST(DecodeUtf8, InvalidBytesBecomeReplacement) {
  const std::u32string cps = DecodeUtf8("a\xFF" "b");
  ASSERT_EQ(cps.size(), 3u);
  EXPECT_EQ(cps[1], U'�');
}

TEST(Whitespace, SplitsOnUnicodeSpaces) {
  // No-break space and ideographic space both separate tokens.
  EXPECT_EQ(WhitespaceTokens("a\xC2\xA0" "b\xE3\x80\x80" "c\n\td"),
            (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_EQ(CountWhitespaceTokens("  one two  three "), 3u);
  EXPECT_EQ(CountWhitespaceTokens(""), 0u);
}

TEST(Whitespace, SpansPointAtTokens) {
  const std::string s = " ab  cde";
  const auto spans = WhitespaceTokenSpans(s);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(s.substr(spans[1].begin, spans[1].end - spans[1].begin), "cde");
}

TEST(Trim, StripsBothEnds) {
  EXPECT_EQ(Trim("  x y \n"), "x y");
  EXPECT_EQ(Trim("   "), "");
}

TEST(ToLower, HandlesNonAscii) { EXPECT_EQ(ToLower("\xC3\x89MILE"), "\xC3\xA9mile"); }

TEST(NormalizeEdgeToken, StripsEdgePunctuationOnly) {
  EXPECT_EQ(NormalizeEdgeToken("Jamaica,"), "jamaica");
  EXPECT_EQ(NormalizeEdgeToken("\xE2\x80\x9CWell\xE2\x80\x9D"), "well");
  EXPECT_EQ(NormalizeEdgeToken("don't!"), "don't");
  EXPECT_EQ(NormalizeEdgeToken("--"), "");
}

}  // namespace
}  // namespace retell::text
