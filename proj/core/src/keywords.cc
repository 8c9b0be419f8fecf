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

#include "retell/keywords.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "retell/error.h"
#include "retell/text.h"

namespace retell::corpus {

const char *KeywordSourceName(KeywordSource source) {
  switch (source) {
    case KeywordSource::kSeed:
      return "seed";
    case KeywordSource::kNpmiExpanded:
      return "npmi-expanded";
    case KeywordSource::kExternal:
      return "external";
  }
  return "external";
}

KeywordSource ParseKeywordSource(const std::string &name) {
  if (name == "seed") return KeywordSource::kSeed;
  if (name == "npmi-expanded") return KeywordSource::kNpmiExpanded;
  if (name == "external") return KeywordSource::kExternal;
  throw DataError("unknown keyword provenance '" + name + "'");
}

std::vector<std::string> KeywordTokens(std::string_view text) {
  std::vector<std::string> tokens;
  for (const std::string &raw : text::WhitespaceTokens(text)) {
    std::string token = text::NormalizeEdgeToken(raw);
    if (!token.empty()) tokens.push_back(std::move(token));
  }
  return tokens;
}

void KeywordList::Add(const std::string &term, KeywordSource source) {
  std::vector<std::string> phrase = KeywordTokens(term);
  if (phrase.empty()) return;
  if (!terms_.insert(phrase).second) return;
  std::string key;
  for (const std::string &token : phrase) {
    if (!key.empty()) key += ' ';
    key += token;
  }
  provenance_.emplace(std::move(key), source);
  phrases_.push_back(std::move(phrase));
}

std::vector<NpmiTerm> ExpandKeywordsNpmi(std::span<const Passage> passages,
                                         const std::set<std::string> &seeds,
                                         const NpmiOptions &options) {
  if (seeds.empty()) throw DataError("keyword expansion needs at least one seed");
  if (options.window == 0) throw DataError("keyword window must be positive");

  std::set<std::string> seed_terms;
  for (const std::string &seed : seeds) {
    std::string normalized = text::NormalizeEdgeToken(seed);
    if (!normalized.empty()) seed_terms.insert(std::move(normalized));
  }

  // Each window is reduced to its set of distinct terms.
  std::vector<std::vector<std::string>> windows;
  for (const Passage &passage : passages) {
    const std::vector<std::string> tokens = KeywordTokens(passage.text);
    for (std::size_t start = 0; start < tokens.size(); start += options.window) {
      const std::size_t stop = std::min(tokens.size(), start + options.window);
      std::vector<std::string> unique(tokens.begin() + start, tokens.begin() + stop);
      std::sort(unique.begin(), unique.end());
      unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
      windows.push_back(std::move(unique));
    }
  }
  const double total = static_cast<double>(windows.size());
  if (windows.empty()) return {};

  std::unordered_map<std::string, std::size_t> df;
  std::unordered_map<std::string, std::unordered_map<std::string, std::size_t>> joint;
  for (const std::vector<std::string> &window : windows) {
    for (const std::string &term : window) ++df[term];
    for (const std::string &term : window) {
      if (!seed_terms.contains(term)) continue;
      auto &row = joint[term];
      for (const std::string &other : window) {
        if (!seed_terms.contains(other)) ++row[other];
      }
    }
  }

  std::unordered_map<std::string, NpmiTerm> best;
  for (const auto &[seed, row] : joint) {
    const double p_seed = static_cast<double>(df.at(seed)) / total;
    for (const auto &[term, together] : row) {
      if (df.at(term) < options.min_candidate_df) continue;
      const double p_term = static_cast<double>(df.at(term)) / total;
      const double p_joint = static_cast<double>(together) / total;
      // Both terms occur in every window: the perfect-dependence limit.
      const double npmi =
          p_joint >= 1.0
              ? 1.0
              : std::clamp(std::log(p_joint / (p_term * p_seed)) / -std::log(p_joint),
                           -1.0, 1.0);
      auto [it, inserted] = best.try_emplace(term, NpmiTerm{term, npmi, seed});
      if (!inserted && (npmi > it->second.npmi ||
                        (npmi == it->second.npmi && seed < it->second.best_seed))) {
        it->second.npmi = npmi;
        it->second.best_seed = seed;
      }
    }
  }

  std::vector<NpmiTerm> out;
  for (auto &[term, scored] : best) {
    if (scored.npmi >= options.threshold) out.push_back(std::move(scored));
  }
  std::sort(out.begin(), out.end(), [](const NpmiTerm &a, const NpmiTerm &b) {
    if (a.npmi != b.npmi) return a.npmi > b.npmi;
    return a.term < b.term;
  });
  return out;
}

namespace {

bool MatchesAt(const std::vector<std::string> &tokens, std::size_t at,
               const std::vector<std::string> &phrase) {
  if (at + phrase.size() > tokens.size()) return false;
  return std::equal(phrase.begin(), phrase.end(), tokens.begin() + at);
}

}  // namespace

bool ContainsKeyword(std::string_view text, const KeywordList &keywords) {
  const std::vector<std::string> tokens = KeywordTokens(text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const std::vector<std::string> &phrase : keywords.phrases()) {
      if (phrase.front() == tokens[i] && MatchesAt(tokens, i, phrase)) return true;
    }
  }
  return false;
}

std::vector<Passage> KeywordFilter(std::span<const Passage> passages,
                                   const KeywordList &keywords) {
  std::vector<Passage> kept;
  for (const Passage &passage : passages) {
    if (ContainsKeyword(passage.text, keywords)) kept.push_back(passage);
  }
  return kept;
}

}  // namespace retell::corpus
