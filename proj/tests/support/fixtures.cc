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

#include "fixtures.h"

#include <fstream>
#include <random>

#include <fmt/format.h>

#include "json.hpp"
#include "oracles.h"
#include "retell/corpus.h"

namespace retell::testing {

namespace {

constexpr const char *kSyllables[] = {"ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "ze", "pa"};
constexpr const char *kNames[] = {"Kino", "Juana", "Ahab", "Emma", "Harriet", "Vronsky"};
constexpr const char *kFiller[] = {"the", "and", "of", "was", "in", "to"};

}  // namespace

std::string ThemeWord(int theme, std::size_t j) {
  return std::string(kSyllables[theme % 10]) + kSyllables[j % 10] + kSyllables[(j / 10) % 10] + "n";
}

Library MakeLibrary(const std::filesystem::path &root, const LibrarySpec &spec) {
  using nlohmann::json;
  std::mt19937 gen(spec.seed);
  std::uniform_int_distribution<std::size_t> word(0, 29);
  std::uniform_int_distribution<int> theme_of(0, spec.themes - 1);
  std::uniform_int_distribution<int> coin(0, 5);

  Library lib;
  lib.root = root;
  lib.books_dir = root / "books";
  lib.retell_fixture = root / "retell_fixture.jsonl";
  lib.gold_labels = root / "gold.jsonl";
  lib.gazetteer = root / "gazetteer.jsonl";
  lib.quotes = root / "quotes.jsonl";
  std::filesystem::create_directories(lib.books_dir);

  std::string fixture, gold, gazetteer, quotes;
  for (std::size_t b = 0; b < spec.books; ++b) {
    const std::string book_id = fmt::format("book{:02d}", b);
    const std::string name = kNames[b % 6];
    std::string contents;
    std::vector<int> themes;
    for (std::size_t p = 0; p < spec.paragraphs_per_book; ++p) {
      const int theme = theme_of(gen);
      themes.push_back(theme);
      std::string para;
      for (std::size_t t = 0; t < spec.tokens_per_paragraph; ++t) {
        if (!para.empty()) para += ' ';
        const int roll = coin(gen);
        if (roll == 0) {
          para += kFiller[t % 6];
        } else if (roll == 1 && t % 7 == 0) {
          para += name + ",";
        } else {
          para += ThemeWord(theme, word(gen));
        }
      }
      contents += para + (p + 1 < spec.paragraphs_per_book ? "\n\n" : "\n");
      if (p == 1) {
        quotes += json{{"book_id", book_id},
                       {"quote", para.substr(0, 120)},
                       {"labels", {fmt::format("theme{}", theme)}}}
                      .dump() +
                  "\n";
      }
    }
    WriteFile(lib.books_dir / (book_id + ".txt"), contents);
    gazetteer += json{{"book_id", book_id}, {"names", {name}}}.dump() + "\n";

    const corpus::Book book = corpus::LoadBook(lib.books_dir / (book_id + ".txt"));
    for (const corpus::Passage &passage : corpus::ChunkPassages(book)) {
      const int theme = themes[passage.paragraph_range.begin];
      std::string retelling = fmt::format("In this passage {} ", name);
      for (std::size_t t = 0; t < spec.retelling_tokens; ++t) {
        retelling += ThemeWord(theme, word(gen)) + (t + 1 < spec.retelling_tokens ? " " : ".");
      }
      fixture += json{{"key", passage.passage_id}, {"text", retelling}}.dump() + "\n";
      gold += json{{"passage_id", passage.passage_id},
                   {"source", "litcharts"},
                   {"topics", {fmt::format("theme{}", theme)}},
                   {"tags", {fmt::format("theme{}-{}", theme, passage.paragraph_range.begin % 2)}}}
                  .dump() +
              "\n";
      lib.passage_ids.push_back(passage.passage_id);
      lib.passage_theme.push_back(theme);
    }
  }
  WriteFile(lib.retell_fixture, fixture);
  WriteFile(lib.gold_labels, gold);
  WriteFile(lib.gazetteer, gazetteer);
  WriteFile(lib.quotes, quotes);
  return lib;
}

std::string LibraryConfig(const Library &lib, int k, int iterations, uint64_t seed) {
  using nlohmann::json;
  json config{
      {"paths",
       {{"books_dir", lib.books_dir.string()},
        {"gazetteer", lib.gazetteer.string()},
        {"gold_labels", lib.gold_labels.string()},
        {"quotes", lib.quotes.string()},
        {"output_dir", (lib.root / "out").string()}}},
      {"backend", {{"backend", "mock"}, {"model", "mock-lm"}, {"retry_delay_ms", 1}}},
      {"retell", {{"verb", "summarize"}, {"mock_fixture", lib.retell_fixture.string()}}},
      {"lda", {{"k", k}, {"iterations", iterations}, {"seed", seed}}},
      {"eval", {{"seed", 3}, {"bootstrap_resamples", 200}}}};
  return config.dump(2);
}

}  // namespace retell::testing
