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

#include "retell/chat.h"

#include <cstdlib>
#include <fstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "httplib.h"
#include "json.hpp"
#include "retell/error.h"

namespace retell::lm {

using nlohmann::json;

std::unique_ptr<MockChatClient> MockChatClient::FromFile(
    const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open mock fixture {}", path.string()));
  std::map<std::string, std::string> responses;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
      const std::string key = record.contains("key") ? record.at("key").get<std::string>()
                                                     : record.at("passage_id").get<std::string>();
      responses[key] = record.at("text").get<std::string>();
    } catch (const json::exception &e) {
      throw DataError(fmt::format("{}:{}: bad fixture record: {}", path.string(),
                                  line_number, e.what()));
    }
  }
  return std::make_unique<MockChatClient>(std::move(responses));
}

std::string MockChatClient::Submit(const PromptRequest &request) {
  {
    std::lock_guard lock(mu_);
    ++calls_;
  }
  auto it = responses_.find(request.request_key);
  if (it == responses_.end()) {
    throw TransportError(
        fmt::format("mock fixture has no response for '{}'", request.request_key),
        /*transient=*/false);
  }
  return it->second;
}

std::size_t MockChatClient::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

OpenAiChatClient::OpenAiChatClient(OpenAiConfig config) : config_(std::move(config)) {
  const std::string &endpoint = config_.endpoint;
  if (endpoint.empty()) throw ConfigError("chat endpoint URL is not configured");
  const std::size_t scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError(fmt::format("chat endpoint '{}' has no scheme", endpoint));
  }
  const std::string scheme = endpoint.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError(fmt::format("unsupported endpoint scheme '{}'", scheme));
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") throw ConfigError("built without TLS support; use http://");
#endif
  const std::size_t path_begin = endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = endpoint.substr(0, path_begin);
  path_ = path_begin == std::string::npos ? "" : endpoint.substr(path_begin);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  constexpr std::string_view kSuffix = "/chat/completions";
  if (!path_.ends_with(kSuffix)) path_ += kSuffix;

  if (!config_.credential_env.empty()) {
    const char *key = std::getenv(config_.credential_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw ConfigError(fmt::format("credential variable {} is not set",
                                    config_.credential_env));
    }
    api_key_ = key;
  }
}

std::string OpenAiChatClient::RequestBody(const PromptRequest &request) const {
  json messages = json::array();
  if (!request.system_text.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.system_text}});
  }
  messages.push_back({{"role", "user"}, {"content", request.user_text}});
  json body = {{"model", request.model_id},
               {"messages", messages},
               {"max_tokens", request.max_new_tokens}};
  if (config_.temperature) body["temperature"] = *config_.temperature;
  if (config_.top_p) body["top_p"] = *config_.top_p;
  return body.dump();
}

std::string ParseChatCompletion(const std::string &body) {
  try {
    const json response = json::parse(body);
    const json &content = response.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw TransportError("completion content is not a string", false);
    return content.get<std::string>();
  } catch (const json::exception &e) {
    throw TransportError(fmt::format("malformed chat completion: {}", e.what()),
                         /*transient=*/false);
  }
}

std::string OpenAiChatClient::Submit(const PromptRequest &request) {
  // httplib clients are not shareable across threads; one per call.
  httplib::Client client(scheme_host_port_);
  const auto timeout = static_cast<time_t>(config_.timeout.count());
  client.set_connection_timeout(timeout, 0);
  client.set_read_timeout(timeout, 0);
  client.set_write_timeout(timeout, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto result = client.Post(path_, headers, RequestBody(request), "application/json");
  if (!result) {
    throw TransportError(fmt::format("request {} failed: {}", request.request_key,
                                     httplib::to_string(result.error())));
  }
  const int status = result->status;
  if (status != 200) {
    const bool transient = status == 408 || status == 409 || status == 429 || status >= 500;
    throw TransportError(fmt::format("request {} returned HTTP {}: {}",
                                     request.request_key, status,
                                     result->body.substr(0, 200)),
                         transient);
  }
  return ParseChatCompletion(result->body);
}

std::string SubmitWithRetry(ChatClient &client, const PromptRequest &request,
                            const RetryPolicy &policy, int *attempts) {
  auto delay = policy.initial_delay;
  const int max_attempts = std::max(1, policy.max_attempts);
  for (int attempt = 1;; ++attempt) {
    if (attempts != nullptr) *attempts = attempt;
    try {
      return client.Submit(request);
    } catch (const TransportError &e) {
      if (!e.transient() || attempt >= max_attempts) throw;
      spdlog::warn("attempt {} for {} failed ({}); retrying in {} ms", attempt,
                   request.request_key, e.what(), delay.count());
    }
    std::this_thread::sleep_for(delay);
    delay = std::chrono::milliseconds(
        static_cast<long long>(static_cast<double>(delay.count()) * policy.multiplier));
  }
}

}  // namespace retell::lm
