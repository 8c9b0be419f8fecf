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

#include "retell/preprocess.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "retell/error.h"
#include "retell/text.h"

namespace retell::preprocess {

Vocabulary::Vocabulary(std::vector<Entry> entries, std::size_t num_docs)
    : entries_(std::move(entries)), num_docs_(num_docs) {
  ids_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!ids_.emplace(entries_[i].term, static_cast<TermId>(i)).second) {
      throw DataError(fmt::format("duplicate vocabulary term '{}'", entries_[i].term));
    }
  }
}

std::optional<TermId> Vocabulary::Find(std::string_view term) const {
  auto it = ids_.find(std::string(term));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t BowDoc::length() const {
  std::size_t total = 0;
  for (const auto &[id, count] : counts) total += count;
  return total;
}

void Gazetteer::Add(const std::string &book_id, std::string_view name) {
  std::set<std::string> &names = names_[book_id];
  for (std::string &token : Tokenize(name)) names.insert(std::move(token));
}

const std::set<std::string> *Gazetteer::NamesFor(const std::string &book_id) const {
  auto it = names_.find(book_id);
  return it == names_.end() ? nullptr : &it->second;
}

Gazetteer Gazetteer::FromFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot read gazetteer {}", path.string()));
  Gazetteer gazetteer;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      const auto book_id = record.at("book_id").get<std::string>();
      gazetteer.names_[book_id];  // books with no names still count as present
      for (const auto &name : record.at("names")) {
        gazetteer.Add(book_id, name.get<std::string>());
      }
    } catch (const nlohmann::json::exception &e) {
      throw DataError(fmt::format("{}:{}: bad gazetteer record: {}", path.string(),
                                  line_number, e.what()));
    }
  }
  return gazetteer;
}

namespace {

bool IsApostrophe(char32_t c) { return c == U'\'' || c == U'’'; }

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  const std::u32string cps = text::DecodeUtf8(text::ToLower(text));
  std::vector<std::string> tokens;
  std::u32string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(text::EncodeUtf8(current));
    current.clear();
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (text::IsLetter(c)) {
      current.push_back(c);
    } else if (IsApostrophe(c) && !current.empty() && i + 1 < cps.size() &&
               text::IsLetter(cps[i + 1])) {
      current.push_back(U'\'');
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> RemoveNames(std::span<const std::string> tokens,
                                     const Gazetteer &gazetteer,
                                     const std::string &book_id) {
  const std::set<std::string> *names = gazetteer.NamesFor(book_id);
  if (names == nullptr) {
    spdlog::warn("gazetteer has no entry for book '{}'; names kept", book_id);
    return {tokens.begin(), tokens.end()};
  }
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const std::string &token : tokens) {
    if (!names->contains(token)) kept.push_back(token);
  }
  return kept;
}

std::size_t MaxDocumentFrequency(double max_df_frac, std::size_t num_docs) {
  // The epsilon keeps products such as 0.29 * 100 from flooring to 28.
  return static_cast<std::size_t>(
      std::floor(max_df_frac * static_cast<double>(num_docs) + 1e-9));
}

Vocabulary BuildVocabulary(std::span<const std::vector<std::string>> docs,
                           const VocabularyOptions &options) {
  if (docs.empty()) throw DataError("cannot build a vocabulary from zero documents");
  std::unordered_map<std::string, Vocabulary::Entry> stats;
  for (const std::vector<std::string> &doc : docs) {
    std::vector<std::string_view> seen;
    seen.reserve(doc.size());
    for (const std::string &token : doc) {
      Vocabulary::Entry &entry = stats[token];
      ++entry.frequency;
      seen.push_back(token);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (std::string_view token : seen) ++stats.find(std::string(token))->second.df;
  }

  const std::size_t max_df = MaxDocumentFrequency(options.max_df_frac, docs.size());
  std::vector<Vocabulary::Entry> kept;
  for (auto &[term, entry] : stats) {
    if (text::DecodeUtf8(term).size() < options.min_chars) continue;
    if (entry.df < options.min_df_docs || entry.df > max_df) continue;
    entry.term = term;
    kept.push_back(std::move(entry));
  }
  if (kept.empty()) {
    throw DataError(fmt::format(
        "vocabulary is empty after filtering {} documents (min_chars={}, "
        "min_df={}, max_df={}); corpus too small or too homogeneous",
        docs.size(), options.min_chars, options.min_df_docs, max_df));
  }
  std::sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.term < b.term;
  });
  return Vocabulary(std::move(kept), docs.size());
}

BowDoc ToBow(std::span<const std::string> tokens, const Vocabulary &vocab,
             std::string doc_id) {
  std::map<TermId, uint32_t> counts;
  for (const std::string &token : tokens) {
    if (auto id = vocab.Find(token)) ++counts[*id];
  }
  BowDoc doc;
  doc.doc_id = std::move(doc_id);
  doc.counts.assign(counts.begin(), counts.end());
  return doc;
}

}  // namespace retell::preprocess
