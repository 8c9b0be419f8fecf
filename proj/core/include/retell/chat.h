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

#ifndef RETELL_CHAT_H_
#define RETELL_CHAT_H_

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace retell::lm {

inline constexpr const char *kSystemPrompt =
    "You are a helpful assistant; follow the instructions in the prompt.";
inline constexpr int kMaxNewTokens = 1024;

struct PromptRequest {
  std::string system_text;  // empty for models without a system role
  std::string user_text;
  int max_new_tokens = kMaxNewTokens;
  std::string model_id;
  // Caller-chosen key identifying the request (passage id, or stage/doc id).
  // Not sent over the wire; used by the mock backend and in logs.
  std::string request_key;

  bool operator==(const PromptRequest &) const = default;
};

// submit(request) -> completion text. Implementations throw TransportError
// and must be safe to call from several threads at once.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string Submit(const PromptRequest &request) = 0;
};

// Deterministic backend answering from a fixture keyed by request_key.
// Unknown keys fail with a non-transient TransportError.
class MockChatClient : public ChatClient {
 public:
  explicit MockChatClient(std::map<std::string, std::string> responses)
      : responses_(std::move(responses)) {}

  // Fixture file: one JSON object per line, {"key": ..., "text": ...}.
  // "passage_id" is accepted in place of "key".
  static std::unique_ptr<MockChatClient> FromFile(const std::filesystem::path &path);

  std::string Submit(const PromptRequest &request) override;

  std::size_t calls() const;

 private:
  std::map<std::string, std::string> responses_;
  mutable std::mutex mu_;
  std::size_t calls_ = 0;
};

struct OpenAiConfig {
  // Base URL such as "https://api.openai.com/v1"; "/chat/completions" is
  // appended unless already present.
  std::string endpoint;
  // Name of the environment variable holding the API key. Empty means the
  // endpoint needs no credentials.
  std::string credential_env;
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::chrono::seconds timeout{120};
};

// Speaks the OpenAI-compatible chat-completions protocol over HTTP(S).
class OpenAiChatClient : public ChatClient {
 public:
  // Throws ConfigError when the endpoint is malformed or the credential
  // variable is named but unset.
  explicit OpenAiChatClient(OpenAiConfig config);

  std::string Submit(const PromptRequest &request) override;

  // The JSON request body sent for `request` (exposed for tests).
  std::string RequestBody(const PromptRequest &request) const;

 private:
  OpenAiConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
};

// Extracts choices[0].message.content from a chat-completions response.
std::string ParseChatCompletion(const std::string &body);

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_delay{500};
  double multiplier = 2.0;
};

// Submits with exponential backoff on transient TransportErrors. `attempts`
// receives the number of calls made. Rethrows the last error on failure.
std::string SubmitWithRetry(ChatClient &client, const PromptRequest &request,
                            const RetryPolicy &policy, int *attempts = nullptr);

}  // namespace retell::lm

#endif  // RETELL_CHAT_H_
