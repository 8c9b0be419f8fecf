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

#ifndef RETELL_RETELLING_H_
#define RETELL_RETELLING_H_

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "retell/chat.h"
#include "retell/corpus.h"

namespace retell::lm {

enum class RetellVerb { kDescribe, kSummarize, kParaphrase };

std::string_view VerbName(RetellVerb verb);
// Accepts "describe", "summarize" or "paraphrase".
RetellVerb ParseVerb(std::string_view name);

enum class RetellStatus { kOk, kFailed };

struct Retelling {
  std::string passage_id;
  RetellVerb verb = RetellVerb::kSummarize;
  std::string model_id;
  std::string run_id = "run0";
  std::string text;
  RetellStatus status = RetellStatus::kOk;
  std::string error;
  int attempts = 0;
};

// The retelling prompt with both verb slots and the passage filled in.
// Throws DataError for an empty passage.
PromptRequest BuildPrompt(RetellVerb verb, const corpus::Passage &passage,
                          std::string_view model_id = {});

struct RetellOptions {
  std::string model_id;
  std::string run_id = "run0";
  std::size_t max_in_flight = 4;
  RetryPolicy retry;
  // Omit the system message (models without a system role).
  bool omit_system_prompt = false;
  // Called once per finished passage, serialized by the batch.
  std::function<void(std::size_t index, const Retelling &)> on_complete;
};

// One record per passage, in input order. Failures after retries become
// kFailed records and the batch continues.
std::vector<Retelling> RetellBatch(std::span<const corpus::Passage> passages,
                                   RetellVerb verb, ChatClient &client,
                                   const RetellOptions &options);

}  // namespace retell::lm

#endif  // RETELL_RETELLING_H_
