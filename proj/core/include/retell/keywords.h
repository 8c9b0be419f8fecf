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

#ifndef RETELL_KEYWORDS_H_
#define RETELL_KEYWORDS_H_

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "retell/corpus.h"

namespace retell::corpus {

enum class KeywordSource { kSeed, kNpmiExpanded, kExternal };

const char *KeywordSourceName(KeywordSource source);
KeywordSource ParseKeywordSource(const std::string &name);

// Lowercase terms; multi-word phrases are token sequences.
class KeywordList {
 public:
  // Normalizes `term` (whitespace split, lowercase, edge punctuation
  // stripped). Empty terms are ignored. The first provenance recorded for a
  // term is kept.
  void Add(const std::string &term, KeywordSource source);

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Keyed by the space-joined phrase.
  const std::map<std::string, KeywordSource> &provenance() const { return provenance_; }
  const std::vector<std::vector<std::string>> &phrases() const { return phrases_; }

 private:
  std::set<std::vector<std::string>> terms_;
  std::vector<std::vector<std::string>> phrases_;
  std::map<std::string, KeywordSource> provenance_;
};

struct NpmiOptions {
  // Passages longer than this are split into consecutive windows.
  std::size_t window = 250;
  double threshold = 0.15;
  // Candidates must appear in at least this many windows.
  std::size_t min_candidate_df = 5;
};

struct NpmiTerm {
  std::string term;
  double npmi = 0.0;
  std::string best_seed;
};

// Tokens used for keyword statistics and matching: whitespace split,
// lowercased, punctuation stripped from token edges.
std::vector<std::string> KeywordTokens(std::string_view text);

// NPMI(w, s) = log(p(w,s) / (p(w) p(s))) / -log p(w,s), with probabilities
// estimated as window document frequencies. Each candidate keeps its best
// score over seeds; candidates scoring at least `threshold` are returned,
// highest first (ties by term). Seeds are never candidates and terms that
// never co-occur with a seed are dropped.
std::vector<NpmiTerm> ExpandKeywordsNpmi(std::span<const Passage> passages,
                                         const std::set<std::string> &seeds,
                                         const NpmiOptions &options = {});

// Passages with at least one keyword as a whole token or token sequence.
std::vector<Passage> KeywordFilter(std::span<const Passage> passages,
                                   const KeywordList &keywords);

bool ContainsKeyword(std::string_view text, const KeywordList &keywords);

}  // namespace retell::corpus

#endif  // RETELL_KEYWORDS_H_
