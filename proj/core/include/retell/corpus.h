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

#ifndef RETELL_CORPUS_H_
#define RETELL_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace retell::corpus {

inline constexpr std::size_t kMaxPassageTokens = 250;
inline constexpr double kDefaultQuoteThreshold = 90.0;

struct Book {
  std::string book_id;
  std::string title;
  std::vector<std::string> paragraphs;
};

// Half-open range of paragraph indices.
struct ParagraphRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const ParagraphRange &) const = default;
};

// A run of whole paragraphs from one book. Paragraphs are joined with a
// blank line ("\n\n") in `text`.
struct Passage {
  std::string passage_id;
  std::string book_id;
  ParagraphRange paragraph_range;
  std::string text;
  std::size_t token_count = 0;

  bool operator==(const Passage &) const = default;
};

struct QuoteMatch {
  std::string quote;
  std::string passage_id;
  double similarity = 0.0;
  // Code-point offsets into the passage text, [begin, end).
  std::size_t span_begin = 0;
  std::size_t span_end = 0;
  // Index into Book::paragraphs of the paragraph holding the end of the
  // matched span.
  std::size_t paragraph_index = 0;
};

// Splits raw file contents into paragraphs at blank lines. Lines inside a
// paragraph keep their newlines; surrounding whitespace is trimmed.
std::vector<std::string> SplitParagraphs(std::string_view contents);

// Reads a UTF-8 book. The book id and title are the file stem.
Book LoadBook(const std::filesystem::path &path);

// Loads every *.txt file in `dir`, sorted by file name.
std::vector<Book> LoadBooks(const std::filesystem::path &dir);

// Greedy left-to-right packing of whole paragraphs into passages of at most
// `max_tokens` whitespace tokens. A paragraph that alone exceeds the limit
// becomes its own passage. Ids are "<book_id>-<index>" with a zero-padded,
// 0-based index.
std::vector<Passage> ChunkPassages(const Book &book,
                                   std::size_t max_tokens = kMaxPassageTokens);

// Builds a passage over paragraphs [range.begin, range.end) of `book`.
Passage MakePassage(const Book &book, ParagraphRange range,
                    std::string passage_id);

// 100 * (1 - D / (|a| + |b|)) with D the insertion/deletion edit distance
// over code points. Two empty strings score 100.
double NormalizedIndelSimilarity(std::string_view a, std::string_view b);

// Same score over decoded code points.
double NormalizedIndelSimilarity(std::u32string_view a, std::u32string_view b);

// Length of the longest common subsequence, bit-parallel.
std::size_t LcsLength(std::u32string_view a, std::u32string_view b);

// Finds the best-matching window for `quote` among `passages` (all from
// `book`, as produced by ChunkPassages). Windows start at a token start,
// end at a token end, and span between 80% and 120% of the quote's length
// in code points. The highest similarity at or above `threshold` wins;
// ties go to the earliest position in the book. Passages shorter than the
// quote are not searched.
std::optional<QuoteMatch> MatchQuote(std::string_view quote, const Book &book,
                                     std::span<const Passage> passages,
                                     double threshold = kDefaultQuoteThreshold);

// Convenience overload that chunks the book first.
std::optional<QuoteMatch> MatchQuote(std::string_view quote, const Book &book,
                                     double threshold = kDefaultQuoteThreshold);

// The passage ending at the quote's paragraph, extended backwards one whole
// paragraph at a time while the total stays within `max_tokens`.
Passage PassageContextForQuote(const QuoteMatch &match, const Book &book,
                               std::size_t max_tokens = kMaxPassageTokens);

}  // namespace retell::corpus

#endif  // RETELL_CORPUS_H_
