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

#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "retell/corpus.h"

namespace {

std::string Words(std::mt19937 &gen, std::size_t n) {
  static const char *kWords[] = {"the", "pearl", "canoe", "morning", "Kino", "Juana", "sea",
                                 "song", "of", "and", "scorpion", "village", "doctor", "light"};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kWords) - 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += kWords[pick(gen)];
  }
  return out;
}

void BM_IndelSimilarity(benchmark::State &state) {
  std::mt19937 gen(1);
  const std::string a = Words(gen, static_cast<std::size_t>(state.range(0)));
  const std::string b = Words(gen, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(retell::corpus::NormalizedIndelSimilarity(a, b));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(a.size() + b.size()));
}
BENCHMARK(BM_IndelSimilarity)->Arg(10)->Arg(50)->Arg(250);

void BM_MatchQuote(benchmark::State &state) {
  std::mt19937 gen(2);
  retell::corpus::Book book{"bench", "bench", {}};
  for (int p = 0; p < state.range(0); ++p) book.paragraphs.push_back(Words(gen, 120));
  const auto passages = retell::corpus::ChunkPassages(book);
  const std::string quote = book.paragraphs[book.paragraphs.size() / 2].substr(0, 160);
  for (auto _ : state) benchmark::DoNotOptimize(retell::corpus::MatchQuote(quote, book, passages));
}
BENCHMARK(BM_MatchQuote)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
