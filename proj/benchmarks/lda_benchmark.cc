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

#include <map>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "retell/lda.h"

namespace {

using retell::preprocess::BowDoc;
using retell::preprocess::TermId;

// Zipf-distributed documents, roughly the shape of retelling corpora.
std::vector<BowDoc> Corpus(std::size_t docs, std::size_t tokens, std::size_t vocab) {
  std::mt19937 gen(42);
  std::vector<double> weights(vocab);
  for (std::size_t w = 0; w < vocab; ++w) weights[w] = 1.0 / static_cast<double>(w + 1);
  std::discrete_distribution<TermId> word(weights.begin(), weights.end());
  std::vector<BowDoc> out(docs);
  for (std::size_t d = 0; d < docs; ++d) {
    std::map<TermId, uint32_t> counts;
    for (std::size_t i = 0; i < tokens; ++i) ++counts[word(gen)];
    out[d] = {"d" + std::to_string(d), {counts.begin(), counts.end()}};
  }
  return out;
}

void BM_GibbsSweep(benchmark::State &state) {
  const int k = static_cast<int>(state.range(0));
  const auto docs = Corpus(1000, 120, 5000);
  retell::lda::LdaConfig config = retell::lda::LdaConfig::WithDefaults(k);
  retell::lda::GibbsSampler sampler(docs, 5000, config);
  for (auto _ : state) sampler.Sweep();
  state.SetItemsProcessed(state.iterations() * 1000 * 120);
}
BENCHMARK(BM_GibbsSweep)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_DocTopicDistributions(benchmark::State &state) {
  const auto docs = Corpus(1000, 120, 5000);
  retell::lda::LdaConfig config = retell::lda::LdaConfig::WithDefaults(50);
  config.iterations = 5;
  const retell::lda::LdaModel model = retell::lda::Train(docs, 5000, config);
  for (auto _ : state) benchmark::DoNotOptimize(retell::lda::DocTopicDistributions(model));
}
BENCHMARK(BM_DocTopicDistributions)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
