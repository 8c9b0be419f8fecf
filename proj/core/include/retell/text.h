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

#ifndef RETELL_TEXT_H_
#define RETELL_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by the corpus and preprocessing stages. Character
// classes come from ICU so "letter" and "whitespace" follow Unicode.
namespace retell::text {

// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD.
std::u32string DecodeUtf8(std::string_view utf8);
std::string EncodeUtf8(std::u32string_view code_points);

bool IsWhitespace(char32_t c);
bool IsLetter(char32_t c);
bool IsAlphanumeric(char32_t c);

// Simple (one-to-one) Unicode lowercase mapping.
std::string ToLower(std::string_view utf8);

// Strips leading and trailing Unicode whitespace.
std::string_view Trim(std::string_view utf8);

// Byte span of one whitespace-delimited token.
struct TokenSpan {
  std::size_t begin = 0;  // byte offset
  std::size_t end = 0;    // byte offset, exclusive
};

// Splits on runs of Unicode whitespace.
std::vector<TokenSpan> WhitespaceTokenSpans(std::string_view utf8);
std::vector<std::string> WhitespaceTokens(std::string_view utf8);
std::size_t CountWhitespaceTokens(std::string_view utf8);

// Lowercases a whitespace token and strips non-alphanumeric characters from
// both edges, so "Jamaica," becomes "jamaica". May return an empty string.
std::string NormalizeEdgeToken(std::string_view token);

}  // namespace retell::text

#endif  // RETELL_TEXT_H_
