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

#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "retell/error.h"
#include "retell/retelling.h"

namespace retell::lm {
namespace {

corpus::Passage MakePassage(const std::string &id, const std::string &text) {
  return {id, "book", {0, 1}, text, 0};
}

std::string ExpectedUserText(const std::string &verb, const std::string &passage) {
  return "In one paragraph, " + verb +
         " the following book excerpt for a literary scholar analyzing narrative content. "
         "Do not include the book title or author's name in your response; " +
         verb + " only the passage.\n\nPassage:\n" + passage;
}

TEST(BuildPrompt, MatchesTemplateForEveryVerb) {
  const corpus::Passage p = MakePassage("p1", "Kino moved sluggishly.\n\nJuana watched.");
  for (auto [verb, name] : {std::pair{RetellVerb::kDescribe, "describe"},
                            std::pair{RetellVerb::kSummarize, "summarize"},
                            std::pair{RetellVerb::kParaphrase, "paraphrase"}}) {
    const PromptRequest request = BuildPrompt(verb, p, "model-x");
    EXPECT_EQ(request.user_text, ExpectedUserText(name, p.text));
    EXPECT_EQ(request.system_text,
              "You are a helpful assistant; follow the instructions in the prompt.");
    EXPECT_EQ(request.max_new_tokens, 1024);
    EXPECT_EQ(request.model_id, "model-x");
    EXPECT_EQ(request.request_key, "p1");
    EXPECT_EQ(request, BuildPrompt(verb, p, "model-x"));
  }
}

TEST(BuildPrompt, QuotedOpenings) {
  const corpus::Passage p = MakePassage("p", "x");
  EXPECT_TRUE(BuildPrompt(RetellVerb::kSummarize, p).user_text.starts_with(
      "In one paragraph, summarize the following book excerpt for a literary scholar analyzing "
      "narrative content."));
  EXPECT_NE(BuildPrompt(RetellVerb::kDescribe, p)
                .user_text.find("Do not include the book title or author's name in your "
                                "response; describe only the passage."),
            std::string::npos);
}

TEST(BuildPrompt, EmptyPassageRejected) {
  EXPECT_THROW(BuildPrompt(RetellVerb::kParaphrase, MakePassage("p", "")), DataError);
}

TEST(Verbs, ParseAndName) {
  EXPECT_EQ(ParseVerb("describe"), RetellVerb::kDescribe);
  EXPECT_EQ(VerbName(RetellVerb::kParaphrase), "paraphrase");
  EXPECT_THROW(ParseVerb("rewrite"), ConfigError);
}

RetellOptions Options(std::size_t in_flight = 4) {
  RetellOptions options;
  options.model_id = "mock";
  options.max_in_flight = in_flight;
  options.retry.initial_delay = std::chrono::milliseconds(1);
  return options;
}

TEST(RetellBatch, MockFixtureRoundTrip) {
  MockChatClient client({{"a", "A."}, {"b", "B."}, {"c", "C."}});
  const std::vector<corpus::Passage> passages = {MakePassage("a", "x"), MakePassage("b", "y"),
                                                 MakePassage("c", "z")};
  const auto out = RetellBatch(passages, RetellVerb::kSummarize, client, Options());
  ASSERT_EQ(out.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out[i].passage_id, passages[i].passage_id);
    EXPECT_EQ(out[i].text, std::string(1, static_cast<char>('A' + i)) + ".");
    EXPECT_EQ(out[i].status, RetellStatus::kOk);
    EXPECT_EQ(out[i].verb, RetellVerb::kSummarize);
    EXPECT_EQ(out[i].run_id, "run0");
    EXPECT_EQ(out[i].attempts, 1);
  }
}

class SometimesFlaky : public ChatClient {
 public:
  std::string Submit(const PromptRequest &request) override {
    std::lock_guard lock(mu_);
    if (request.request_key == "dead") throw TransportError("down", true);
    if (request.request_key == "flaky" && flaky_calls_++ < 2) throw TransportError("503", true);
    return "r:" + request.request_key;
  }

 private:
  std::mutex mu_;
  int flaky_calls_ = 0;
};

TEST(RetellBatch, RetriesThenRecordsFailures) {
  SometimesFlaky client;
  const std::vector<corpus::Passage> passages = {MakePassage("ok", "x"), MakePassage("flaky", "x"),
                                                 MakePassage("dead", "x"),
                                                 MakePassage("tail", "x")};
  const auto out = RetellBatch(passages, RetellVerb::kDescribe, client, Options());
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[1].status, RetellStatus::kOk);
  EXPECT_EQ(out[1].attempts, 3);
  EXPECT_EQ(out[2].status, RetellStatus::kFailed);
  EXPECT_EQ(out[2].attempts, 3);
  EXPECT_FALSE(out[2].error.empty());
  EXPECT_TRUE(out[2].text.empty());
  EXPECT_EQ(out[3].text, "r:tail");
}

TEST(RetellBatch, EmptyCompletionIsFailure) {
  MockChatClient client(std::map<std::string, std::string>{{"a", ""}});
  const auto out = RetellBatch(std::vector{MakePassage("a", "x")}, RetellVerb::kSummarize,
                               client, Options());
  EXPECT_EQ(out[0].status, RetellStatus::kFailed);
}

class SlowRandomClient : public ChatClient {
 public:
  std::string Submit(const PromptRequest &request) override {
    const int now = ++in_flight_;
    int seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::microseconds(
        100 * (std::hash<std::string>{}(request.request_key) % 20)));
    --in_flight_;
    return "t:" + request.request_key;
  }
  std::atomic<int> in_flight_{0};
  std::atomic<int> peak_{0};
};

TEST(RetellBatch, OrderedAndBoundedUnderConcurrency) {
  SlowRandomClient client;
  std::vector<corpus::Passage> passages;
  for (int i = 0; i < 64; ++i) passages.push_back(MakePassage("p" + std::to_string(i), "x"));
  std::set<std::size_t> completed;
  RetellOptions options = Options(3);
  options.on_complete = [&](std::size_t index, const Retelling &r) {
    EXPECT_TRUE(completed.insert(index).second);
    EXPECT_EQ(r.passage_id, passages[index].passage_id);
  };
  const auto out = RetellBatch(passages, RetellVerb::kParaphrase, client, options);
  ASSERT_EQ(out.size(), passages.size());
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i].text, "t:p" + std::to_string(i));
  EXPECT_EQ(completed.size(), passages.size());
  EXPECT_LE(client.peak_.load(), 3);
}

TEST(RetellBatch, EmptyInput) {
  MockChatClient client({});
  EXPECT_TRUE(RetellBatch({}, RetellVerb::kSummarize, client, Options()).empty());
}

}  // namespace
}  // namespace retell::lm
