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

#ifndef RETELL_PREPROCESS_H_
#define RETELL_PREPROCESS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace retell::preprocess {

using TermId = uint32_t;

struct VocabularyOptions {
  std::size_t min_chars = 3;
  double max_df_frac = 0.25;
  std::size_t min_df_docs = 5;
};

class Vocabulary {
 public:
  struct Entry {
    std::string term;
    std::size_t df = 0;         // documents containing the term
    std::size_t frequency = 0;  // total occurrences
  };

  Vocabulary() = default;
  // Entries are taken in id order.
  Vocabulary(std::vector<Entry> entries, std::size_t num_docs);

  std::size_t size() const { return entries_.size(); }
  std::size_t num_docs() const { return num_docs_; }
  const Entry &entry(TermId id) const { return entries_.at(id); }
  const std::string &term(TermId id) const { return entries_.at(id).term; }
  const std::vector<Entry> &entries() const { return entries_; }
  std::optional<TermId> Find(std::string_view term) const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, TermId> ids_;
  std::size_t num_docs_ = 0;
};

// Sparse counts sorted by term id; every count is positive.
struct BowDoc {
  std::string doc_id;
  std::vector<std::pair<TermId, uint32_t>> counts;

  bool empty() const { return counts.empty(); }
  std::size_t length() const;
};

// Per-book character names, stored as lowercase tokens.
class Gazetteer {
 public:
  // Each name is tokenized, so "Juana Kino" contributes "juana" and "kino".
  void Add(const std::string &book_id, std::string_view name);
  bool HasBook(const std::string &book_id) const { return names_.contains(book_id); }
  const std::set<std::string> *NamesFor(const std::string &book_id) const;

  // One JSON object per line: {"book_id": ..., "names": [...]}.
  static Gazetteer FromFile(const std::filesystem::path &path);

 private:
  std::map<std::string, std::set<std::string>> names_;
};

// Lowercases, then emits maximal runs of Unicode letters. An apostrophe
// (' or U+2019, emitted as ') between two letters stays inside the token.
std::vector<std::string> Tokenize(std::string_view text);

// Drops tokens listed for `book_id`. A book without an entry is returned
// unchanged with a warning.
std::vector<std::string> RemoveNames(std::span<const std::string> tokens,
                                     const Gazetteer &gazetteer,
                                     const std::string &book_id);

// Keeps a term iff it has at least `min_chars` characters and
// min_df_docs <= df <= floor(max_df_frac * N). Ids follow descending total
// frequency, then lexicographic order. Throws DataError when nothing survives.
Vocabulary BuildVocabulary(std::span<const std::vector<std::string>> docs,
                           const VocabularyOptions &options = {});

// Largest document frequency the max-df filter admits for `num_docs`.
std::size_t MaxDocumentFrequency(double max_df_frac, std::size_t num_docs);

BowDoc ToBow(std::span<const std::string> tokens, const Vocabulary &vocab,
             std::string doc_id = {});

}  // namespace retell::preprocess

#endif  // RETELL_PREPROCESS_H_
