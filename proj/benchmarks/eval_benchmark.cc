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

#include <algorithm>
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "retell/eval.h"

namespace {

struct Instance {
  retell::eval::Prediction preds;
  retell::eval::GoldLabels gold;
};

Instance Make(std::size_t passages) {
  std::mt19937 gen(7);
  Instance inst;
  std::vector<std::string> topics;
  for (int t = 0; t < 50; ++t) topics.push_back(std::to_string(t));
  for (std::size_t i = 0; i < passages; ++i) {
    const std::string id = "p" + std::to_string(i);
    std::shuffle(topics.begin(), topics.end(), gen);
    inst.preds[id] = topics;
    inst.gold[id] = {"litcharts",
                     {"g" + std::to_string(gen() % 27)},
                     {"t" + std::to_string(gen() % 200), "t" + std::to_string(gen() % 200)}};
  }
  return inst;
}

void BM_PairwisePrecision(benchmark::State &state) {
  const Instance inst = Make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(retell::eval::PairwisePrecision(inst.preds, inst.gold));
}
BENCHMARK(BM_PairwisePrecision)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_PairwiseRecall(benchmark::State &state) {
  const Instance inst = Make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(retell::eval::PairwiseRecall(inst.preds, inst.gold));
}
BENCHMARK(BM_PairwiseRecall)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
