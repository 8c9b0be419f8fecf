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

#ifndef RETELL_TESTS_FIXTURES_H_
#define RETELL_TESTS_FIXTURES_H_

// Synthetic library for pipeline tests: books built from disjoint theme
// vocabularies, a mock retelling fixture, gold labels and a gazetteer.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace retell::testing {

struct LibrarySpec {
  std::size_t books = 2;
  std::size_t paragraphs_per_book = 10;
  std::size_t tokens_per_paragraph = 200;  // > 125, so one paragraph per passage
  std::size_t retelling_tokens = 60;
  int themes = 5;
  uint32_t seed = 11;
};

struct Library {
  std::filesystem::path root;
  std::filesystem::path books_dir;
  std::filesystem::path retell_fixture;
  std::filesystem::path gold_labels;
  std::filesystem::path gazetteer;
  std::filesystem::path quotes;
  std::vector<std::string> passage_ids;
  std::vector<int> passage_theme;
};

// Word `j` of theme `t`: letters only, unique per (t, j) for j < 100.
std::string ThemeWord(int theme, std::size_t j);

Library MakeLibrary(const std::filesystem::path &root, const LibrarySpec &spec);

// JSON config text pointing at `lib`, with output under root/out.
std::string LibraryConfig(const Library &lib, int k, int iterations, uint64_t seed);

}  // namespace retell::testing

#endif  // RETELL_TESTS_FIXTURES_H_
