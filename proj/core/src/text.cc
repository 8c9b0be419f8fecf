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

#include "retell/text.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace retell::text {

std::u32string DecodeUtf8(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto *bytes = reinterpret_cast<const uint8_t *>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

std::string EncodeUtf8(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (char32_t c : code_points) {
    uint8_t buffer[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buffer, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      out += "\xEF\xBF\xBD";
      continue;
    }
    out.append(reinterpret_cast<const char *>(buffer), n);
  }
  return out;
}

bool IsWhitespace(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c));
}

bool IsLetter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }

bool IsAlphanumeric(char32_t c) { return u_isalnum(static_cast<UChar32>(c)); }

std::string ToLower(std::string_view utf8) {
  std::u32string cps = DecodeUtf8(utf8);
  for (char32_t &c : cps) {
    c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
  }
  return EncodeUtf8(cps);
}

namespace {

// Visits code points of a UTF-8 string with their byte offsets.
template <typename Visitor>
void ForEachCodePoint(std::string_view utf8, Visitor &&visit) {
  const auto *bytes = reinterpret_cast<const uint8_t *>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) c = 0xFFFD;
    visit(static_cast<char32_t>(c), static_cast<std::size_t>(start),
          static_cast<std::size_t>(i));
  }
}

}  // namespace

std::string_view Trim(std::string_view utf8) {
  std::size_t first = utf8.size();
  std::size_t last = 0;
  ForEachCodePoint(utf8, [&](char32_t c, std::size_t begin, std::size_t end) {
    if (IsWhitespace(c)) return;
    if (first == utf8.size()) first = begin;
    last = end;
  });
  if (first == utf8.size()) return {};
  return utf8.substr(first, last - first);
}

std::vector<TokenSpan> WhitespaceTokenSpans(std::string_view utf8) {
  std::vector<TokenSpan> spans;
  bool in_token = false;
  TokenSpan current;
  ForEachCodePoint(utf8, [&](char32_t c, std::size_t begin, std::size_t end) {
    if (IsWhitespace(c)) {
      if (in_token) spans.push_back(current);
      in_token = false;
      return;
    }
    if (!in_token) {
      current.begin = begin;
      in_token = true;
    }
    current.end = end;
  });
  if (in_token) spans.push_back(current);
  return spans;
}

std::vector<std::string> WhitespaceTokens(std::string_view utf8) {
  std::vector<std::string> tokens;
  for (const TokenSpan &span : WhitespaceTokenSpans(utf8)) {
    tokens.emplace_back(utf8.substr(span.begin, span.end - span.begin));
  }
  return tokens;
}

std::size_t CountWhitespaceTokens(std::string_view utf8) {
  std::size_t count = 0;
  bool in_token = false;
  ForEachCodePoint(utf8, [&](char32_t c, std::size_t, std::size_t) {
    const bool space = IsWhitespace(c);
    if (!space && !in_token) ++count;
    in_token = !space;
  });
  return count;
}

std::string NormalizeEdgeToken(std::string_view token) {
  std::u32string cps = DecodeUtf8(token);
  std::size_t begin = 0;
  std::size_t end = cps.size();
  while (begin < end && !IsAlphanumeric(cps[begin])) ++begin;
  while (end > begin && !IsAlphanumeric(cps[end - 1])) --end;
  std::u32string core = cps.substr(begin, end - begin);
  for (char32_t &c : core) {
    c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
  }
  return EncodeUtf8(core);
}

}  // namespace retell::text
