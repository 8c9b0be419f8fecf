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

#include "retell/retelling.h"

#include <mutex>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "parallel.h"
#include "retell/error.h"

namespace retell::lm {

std::string_view VerbName(RetellVerb verb) {
  switch (verb) {
    case RetellVerb::kDescribe:
      return "describe";
    case RetellVerb::kSummarize:
      return "summarize";
    case RetellVerb::kParaphrase:
      return "paraphrase";
  }
  return "summarize";
}

RetellVerb ParseVerb(std::string_view name) {
  if (name == "describe") return RetellVerb::kDescribe;
  if (name == "summarize") return RetellVerb::kSummarize;
  if (name == "paraphrase") return RetellVerb::kParaphrase;
  throw ConfigError(fmt::format(
      "unknown retell verb '{}' (expected describe, summarize or paraphrase)", name));
}

PromptRequest BuildPrompt(RetellVerb verb, const corpus::Passage &passage,
                          std::string_view model_id) {
  if (passage.text.empty()) {
    throw DataError(fmt::format("passage {} has no text to retell", passage.passage_id));
  }
  const std::string_view name = VerbName(verb);
  PromptRequest request;
  request.system_text = kSystemPrompt;
  request.user_text = fmt::format(
      "In one paragraph, {0} the following book excerpt for a literary scholar "
      "analyzing narrative content. Do not include the book title or author's "
      "name in your response; {0} only the passage.\n\nPassage:\n{1}",
      name, passage.text);
  request.max_new_tokens = kMaxNewTokens;
  request.model_id = std::string(model_id);
  request.request_key = passage.passage_id;
  return request;
}

std::vector<Retelling> RetellBatch(std::span<const corpus::Passage> passages,
                                   RetellVerb verb, ChatClient &client,
                                   const RetellOptions &options) {
  std::vector<Retelling> results(passages.size());
  std::mutex report_mu;
  internal::ParallelFor(passages.size(), options.max_in_flight, [&](std::size_t i) {
    const corpus::Passage &passage = passages[i];
    Retelling &out = results[i];
    out.passage_id = passage.passage_id;
    out.verb = verb;
    out.model_id = options.model_id;
    out.run_id = options.run_id;
    try {
      PromptRequest request = BuildPrompt(verb, passage, options.model_id);
      if (options.omit_system_prompt) request.system_text.clear();
      out.text = SubmitWithRetry(client, request, options.retry, &out.attempts);
      if (out.text.empty()) {
        out.status = RetellStatus::kFailed;
        out.error = "empty completion";
      }
    } catch (const Error &e) {
      if (e.kind() == ErrorKind::kConfig) throw;
      out.status = RetellStatus::kFailed;
      out.error = e.what();
      out.text.clear();
      spdlog::warn("retelling {} failed after {} attempt(s): {}", passage.passage_id,
                   out.attempts, e.what());
    }
    if (out.status == RetellStatus::kOk && out.attempts > 1) {
      spdlog::info("retelling {} succeeded after {} attempts", passage.passage_id,
                   out.attempts);
    }
    if (options.on_complete) {
      std::lock_guard lock(report_mu);
      options.on_complete(i, out);
    }
  });
  return results;
}

}  // namespace retell::lm
