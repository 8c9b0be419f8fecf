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

#include "retell/tglite.h"

#include <algorithm>
#include <mutex>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "parallel.h"
#include "retell/error.h"
#include "retell/prompts.h"
#include "retell/text.h"

namespace retell::tglite {

std::string_view ModeName(GenerationMode mode) {
  return mode == GenerationMode::kSingle ? "single" : "multi";
}

GenerationMode ParseMode(std::string_view name) {
  if (name == "single") return GenerationMode::kSingle;
  if (name == "multi") return GenerationMode::kMulti;
  throw ConfigError(fmt::format("unknown generation mode '{}' (expected single or multi)", name));
}

std::string NormalizeLabel(std::string_view label) {
  return text::ToLower(text::Trim(label));
}

bool TopicPool::Add(PoolTopic topic) {
  std::string key = NormalizeLabel(topic.label);
  if (key.empty() || index_.contains(key)) return false;
  index_.emplace(std::move(key), topics_.size());
  topics_.push_back(std::move(topic));
  return true;
}

std::optional<std::size_t> TopicPool::Find(std::string_view label) const {
  auto it = index_.find(NormalizeLabel(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string TopicPool::Render() const {
  std::string out;
  for (const PoolTopic &topic : topics_) {
    if (!out.empty()) out += '\n';
    out += topic.label;
    out += ": ";
    out += topic.description;
  }
  return out;
}

namespace {

bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }

// Removes list markers such as "-", "*", "•", "1.", "2)" and "(3)".
std::string_view StripListMarker(std::string_view line) {
  while (true) {
    line = text::Trim(line);
    // A bullet needs trailing space, so "**Love**" keeps its emphasis.
    if (line.size() >= 2 && (line[0] == '-' || line[0] == '*' || line[0] == '+') &&
        (line[1] == ' ' || line[1] == '\t')) {
      line.remove_prefix(1);
      continue;
    }
    if (line.starts_with("•")) {
      line.remove_prefix(std::string_view("•").size());
      continue;
    }
    std::size_t i = line.starts_with("(") ? 1 : 0;
    const std::size_t digits_begin = i;
    while (i < line.size() && IsAsciiDigit(line[i])) ++i;
    if (i > digits_begin && i < line.size() && (line[i] == '.' || line[i] == ')')) {
      line.remove_prefix(i + 1);
      continue;
    }
    return line;
  }
}

std::string_view StripLabelDecoration(std::string_view label) {
  label = text::Trim(label);
  while (label.size() >= 2 && label.starts_with("*") && label.ends_with("*")) {
    label = text::Trim(label.substr(1, label.size() - 2));
  }
  if (label.size() >= 2 && label.front() == '[' && label.back() == ']') {
    label = text::Trim(label.substr(1, label.size() - 2));
  }
  return label;
}

}  // namespace

std::vector<TopicLine> ParseTopicLines(std::string_view response) {
  std::vector<TopicLine> lines;
  std::size_t pos = 0;
  while (pos <= response.size()) {
    std::size_t eol = response.find('\n', pos);
    if (eol == std::string_view::npos) eol = response.size();
    const std::string_view line = StripListMarker(response.substr(pos, eol - pos));
    pos = eol + 1;

    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    const std::string_view label = StripLabelDecoration(line.substr(0, colon));
    const std::string_view description = text::Trim(line.substr(colon + 1));
    if (label.empty() || description.empty()) continue;
    if (NormalizeLabel(label) == "none") continue;
    lines.push_back({std::string(label), std::string(description)});
  }
  return lines;
}

namespace {

lm::PromptRequest MakeRequest(std::string user_text, std::string_view model_id,
                              std::string key) {
  lm::PromptRequest request;
  request.system_text = lm::kSystemPrompt;
  request.user_text = std::move(user_text);
  request.max_new_tokens = lm::kMaxNewTokens;
  request.model_id = std::string(model_id);
  request.request_key = std::move(key);
  return request;
}

}  // namespace

lm::PromptRequest BuildGenerationPrompt(const Document &doc, const TopicPool &pool,
                                        GenerationMode mode, std::string_view model_id) {
  const std::string_view tmpl = mode == GenerationMode::kSingle
                                    ? prompts::TopicGenerationSingleTemplate()
                                    : prompts::TopicGenerationMultiTemplate();
  return MakeRequest(prompts::Render(tmpl, {{"Topics", pool.Render()}, {"Document", doc.text}}),
                     model_id, "generate/" + doc.doc_id);
}

lm::PromptRequest BuildAssignmentPrompt(const Document &doc, const TopicPool &pool,
                                        std::string_view model_id) {
  return MakeRequest(prompts::Render(prompts::TopicAssignmentTemplate(),
                                     {{"tree", pool.Render()}, {"Document", doc.text}}),
                     model_id, "assign/" + doc.doc_id);
}

TopicPool GenerateTopics(std::span<const Document> sample, lm::ChatClient &client,
                         const TgliteOptions &options) {
  TopicPool pool;
  for (const Document &doc : sample) {
    lm::PromptRequest request = BuildGenerationPrompt(doc, pool, options.mode, options.model_id);
    if (options.omit_system_prompt) request.system_text.clear();
    std::string response;
    try {
      response = lm::SubmitWithRetry(client, request, options.retry);
    } catch (const Error &e) {
      if (e.kind() == ErrorKind::kConfig) throw;
      spdlog::warn("topic generation skipped {}: {}", doc.doc_id, e.what());
      continue;
    }
    std::vector<TopicLine> parsed = ParseTopicLines(response);
    if (options.mode == GenerationMode::kSingle && parsed.size() > 1) parsed.resize(1);
    for (TopicLine &line : parsed) {
      pool.Add({std::move(line.label), std::move(line.description), doc.doc_id});
    }
  }
  return pool;
}

namespace {

TopicAssignment FilterToPool(const std::string &doc_id, std::string_view response,
                             const TopicPool &pool, std::size_t *hallucinated) {
  TopicAssignment assignment;
  assignment.doc_id = doc_id;
  std::set<std::size_t> seen;
  for (const TopicLine &line : ParseTopicLines(response)) {
    const std::optional<std::size_t> index = pool.Find(line.label);
    if (!index) {
      ++*hallucinated;
      continue;
    }
    if (!seen.insert(*index).second) continue;
    assignment.ranked_labels.push_back(pool.topics()[*index].label);
  }
  return assignment;
}

}  // namespace

TopicAssignment AssignTopics(const Document &doc, const TopicPool &pool,
                             lm::ChatClient &client, const TgliteOptions &options,
                             AssignmentDiagnostics *diagnostics) {
  if (pool.empty()) throw DataError("topic assignment needs a non-empty topic pool");
  lm::PromptRequest request = BuildAssignmentPrompt(doc, pool, options.model_id);
  if (options.omit_system_prompt) request.system_text.clear();
  AssignmentDiagnostics local;
  TopicAssignment assignment{doc.doc_id, {}};
  try {
    const std::string response = lm::SubmitWithRetry(client, request, options.retry);
    assignment = FilterToPool(doc.doc_id, response, pool, &local.hallucinated_count);
  } catch (const TransportError &e) {
    spdlog::warn("topic assignment failed for {}: {}", doc.doc_id, e.what());
    ++local.failed_count;
  }
  if (assignment.ranked_labels.empty()) ++local.empty_count;
  if (diagnostics != nullptr) {
    diagnostics->hallucinated_count += local.hallucinated_count;
    diagnostics->empty_count += local.empty_count;
    diagnostics->failed_count += local.failed_count;
  }
  return assignment;
}

std::vector<TopicAssignment> AssignTopicsBatch(std::span<const Document> docs,
                                               const TopicPool &pool,
                                               lm::ChatClient &client,
                                               const TgliteOptions &options,
                                               AssignmentDiagnostics *diagnostics) {
  if (pool.empty()) throw DataError("topic assignment needs a non-empty topic pool");
  std::vector<TopicAssignment> out(docs.size());
  std::vector<AssignmentDiagnostics> per_doc(docs.size());
  internal::ParallelFor(docs.size(), options.max_in_flight, [&](std::size_t i) {
    out[i] = AssignTopics(docs[i], pool, client, options, &per_doc[i]);
  });
  if (diagnostics != nullptr) {
    for (const AssignmentDiagnostics &d : per_doc) {
      diagnostics->hallucinated_count += d.hallucinated_count;
      diagnostics->empty_count += d.empty_count;
      diagnostics->failed_count += d.failed_count;
    }
  }
  return out;
}

std::vector<LabelScore> MrrProminence(std::span<const TopicAssignment> assignments,
                                      const TopicPool &pool) {
  if (assignments.empty()) throw DataError("MRR prominence needs at least one assignment");
  std::vector<double> sums(pool.size(), 0.0);
  for (const TopicAssignment &assignment : assignments) {
    for (std::size_t r = 0; r < assignment.ranked_labels.size(); ++r) {
      if (auto index = pool.Find(assignment.ranked_labels[r])) {
        sums[*index] += 1.0 / static_cast<double>(r + 1);
      }
    }
  }
  std::vector<LabelScore> scores;
  scores.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    scores.push_back({pool.topics()[i].label,
                      sums[i] / static_cast<double>(assignments.size())});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const LabelScore &a, const LabelScore &b) { return a.mrr > b.mrr; });
  return scores;
}

std::size_t AssignedTopicCount(std::span<const TopicAssignment> assignments) {
  std::set<std::string> labels;
  for (const TopicAssignment &assignment : assignments) {
    for (const std::string &label : assignment.ranked_labels) labels.insert(NormalizeLabel(label));
  }
  return labels.size();
}

}  // namespace retell::tglite
