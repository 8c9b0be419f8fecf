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

#include "retell/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "bit_lcs.h"
#include "retell/error.h"
#include "retell/text.h"

namespace retell::corpus {

namespace fs = std::filesystem;

std::vector<std::string> SplitParagraphs(std::string_view contents) {
  std::vector<std::string> paragraphs;
  std::string current;
  auto flush = [&] {
    std::string_view trimmed = text::Trim(current);
    if (!trimmed.empty()) paragraphs.emplace_back(trimmed);
    current.clear();
  };
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::Trim(line).empty()) {
      flush();
    } else {
      if (!current.empty()) current += '\n';
      current += line;
    }
    pos = eol + 1;
  }
  flush();
  return paragraphs;
}

Book LoadBook(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read book file {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw DataError(fmt::format("error reading {}", path.string()));
  Book book;
  book.book_id = path.stem().string();
  book.title = book.book_id;
  book.paragraphs = SplitParagraphs(buffer.str());
  return book;
}

std::vector<Book> LoadBooks(const fs::path &dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw DataError(fmt::format("books directory {} does not exist", dir.string()));
  }
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw DataError(fmt::format("no .txt books found in {}", dir.string()));
  }
  std::vector<Book> books;
  books.reserve(files.size());
  for (const fs::path &file : files) books.push_back(LoadBook(file));
  return books;
}

Passage MakePassage(const Book &book, ParagraphRange range,
                    std::string passage_id) {
  Passage passage;
  passage.passage_id = std::move(passage_id);
  passage.book_id = book.book_id;
  passage.paragraph_range = range;
  for (std::size_t i = range.begin; i < range.end; ++i) {
    if (i > range.begin) passage.text += "\n\n";
    passage.text += book.paragraphs[i];
    passage.token_count += text::CountWhitespaceTokens(book.paragraphs[i]);
  }
  return passage;
}

std::vector<Passage> ChunkPassages(const Book &book, std::size_t max_tokens) {
  std::vector<Passage> passages;
  const std::size_t n = book.paragraphs.size();
  std::size_t begin = 0;
  std::size_t running = 0;
  auto close = [&](std::size_t end) {
    passages.push_back(MakePassage(
        book, {begin, end},
        fmt::format("{}-{:05d}", book.book_id, passages.size())));
    begin = end;
    running = 0;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t tokens = text::CountWhitespaceTokens(book.paragraphs[i]);
    if (i > begin && running + tokens > max_tokens) close(i);
    running += tokens;
  }
  if (begin < n) close(n);
  return passages;
}

namespace {

double IndelScore(std::size_t lcs, std::size_t len_a, std::size_t len_b) {
  const std::size_t total = len_a + len_b;
  if (total == 0) return 100.0;
  const std::size_t distance = total - 2 * lcs;
  return 100.0 * (1.0 - static_cast<double>(distance) / static_cast<double>(total));
}

struct CodePointSpan {
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePointSpan> TokenSpans(std::u32string_view cps) {
  std::vector<CodePointSpan> spans;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && text::IsWhitespace(cps[i])) ++i;
    if (i == cps.size()) break;
    const std::size_t begin = i;
    while (i < cps.size() && !text::IsWhitespace(cps[i])) ++i;
    spans.push_back({begin, i});
  }
  return spans;
}

}  // namespace

std::optional<QuoteMatch> MatchQuote(std::string_view quote, const Book &book,
                                     std::span<const Passage> passages,
                                     double threshold) {
  const std::u32string pattern = text::DecodeUtf8(quote);
  const std::size_t length = pattern.size();
  if (length == 0) return std::nullopt;
  const auto min_window = static_cast<std::size_t>(std::ceil(0.8 * static_cast<double>(length)));
  const auto max_window = static_cast<std::size_t>(std::floor(1.2 * static_cast<double>(length)));

  internal::BitLcs lcs(pattern);
  struct Best {
    std::size_t passage = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t lcs = 0;
    double similarity = -1.0;
  };
  std::optional<Best> best;

  for (std::size_t p = 0; p < passages.size(); ++p) {
    const std::u32string cps = text::DecodeUtf8(passages[p].text);
    if (cps.size() < length) continue;
    const std::vector<CodePointSpan> tokens = TokenSpans(cps);
    for (std::size_t first = 0; first < tokens.size(); ++first) {
      const std::size_t begin = tokens[first].begin;
      lcs.Reset();
      std::size_t consumed = begin;
      for (std::size_t last = first; last < tokens.size(); ++last) {
        const std::size_t end = tokens[last].end;
        const std::size_t window = end - begin;
        if (window > max_window) break;
        for (; consumed < end; ++consumed) lcs.Consume(cps[consumed]);
        if (window < min_window) continue;
        const std::size_t common = lcs.Lcs();
        const double score = IndelScore(common, length, window);
        if (score < threshold) continue;
        // Exact comparison of 2*lcs/(length+window); earlier positions win ties.
        if (best) {
          const std::size_t lhs = common * (length + best->end - best->begin);
          const std::size_t rhs = best->lcs * (length + window);
          if (lhs <= rhs) continue;
        }
        best = Best{p, begin, end, common, score};
      }
    }
  }
  if (!best) return std::nullopt;

  const Passage &passage = passages[best->passage];
  QuoteMatch match;
  match.quote = std::string(quote);
  match.passage_id = passage.passage_id;
  match.similarity = best->similarity;
  match.span_begin = best->begin;
  match.span_end = best->end;

  // Locate the paragraph holding the last matched character. Paragraphs are
  // separated by two code points ("\n\n") in the passage text.
  std::size_t offset = 0;
  match.paragraph_index = passage.paragraph_range.begin;
  for (std::size_t i = passage.paragraph_range.begin;
       i < passage.paragraph_range.end; ++i) {
    const std::size_t para_length = text::DecodeUtf8(book.paragraphs[i]).size();
    match.paragraph_index = i;
    if (best->end - 1 < offset + para_length + 2) break;
    offset += para_length + 2;
  }
  return match;
}

std::optional<QuoteMatch> MatchQuote(std::string_view quote, const Book &book,
                                     double threshold) {
  const std::vector<Passage> passages = ChunkPassages(book);
  return MatchQuote(quote, book, passages, threshold);
}

Passage PassageContextForQuote(const QuoteMatch &match, const Book &book,
                               std::size_t max_tokens) {
  if (match.paragraph_index >= book.paragraphs.size()) {
    throw DataError(fmt::format("paragraph {} out of range for book {}",
                                match.paragraph_index, book.book_id));
  }
  std::size_t begin = match.paragraph_index;
  std::size_t total = text::CountWhitespaceTokens(book.paragraphs[begin]);
  while (begin > 0) {
    const std::size_t previous = text::CountWhitespaceTokens(book.paragraphs[begin - 1]);
    if (total + previous > max_tokens) break;
    total += previous;
    --begin;
  }
  return MakePassage(book, {begin, match.paragraph_index + 1},
                     fmt::format("{}-q{:05d}", book.book_id, match.paragraph_index));
}

}  // namespace retell::corpus
