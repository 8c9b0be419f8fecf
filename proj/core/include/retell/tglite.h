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

#ifndef RETELL_TGLITE_H_
#define RETELL_TGLITE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "retell/chat.h"

// Two-stage direct labeling: an LM grows a flat topic pool over a sample of
// documents, then ranks pool topics for every document.
namespace retell::tglite {

struct Document {
  std::string doc_id;
  std::string text;
};

enum class GenerationMode { kSingle, kMulti };

std::string_view ModeName(GenerationMode mode);
GenerationMode ParseMode(std::string_view name);

struct TopicLine {
  std::string label;
  std::string description;

  bool operator==(const TopicLine &) const = default;
};

struct PoolTopic {
  std::string label;  // original casing
  std::string description;
  std::string origin_doc;
};

// Case-insensitive label comparison key: trimmed and lowercased.
std::string NormalizeLabel(std::string_view label);

class TopicPool {
 public:
  // Appends unless a label with the same normalized form exists. Returns
  // true when added.
  bool Add(PoolTopic topic);

  std::optional<std::size_t> Find(std::string_view label) const;
  bool Contains(std::string_view label) const { return Find(label).has_value(); }

  const std::vector<PoolTopic> &topics() const { return topics_; }
  std::size_t size() const { return topics_.size(); }
  bool empty() const { return topics_.empty(); }

  // One "Label: Description" line per topic, in insertion order.
  std::string Render() const;

 private:
  std::vector<PoolTopic> topics_;
  std::map<std::string, std::size_t> index_;
};

struct TopicAssignment {
  std::string doc_id;
  std::vector<std::string> ranked_labels;  // pool casing, most prominent first
};

struct AssignmentDiagnostics {
  std::size_t hallucinated_count = 0;  // labels dropped as absent from the pool
  std::size_t empty_count = 0;         // documents left with no label
  std::size_t failed_count = 0;        // documents whose request failed
};

// Lenient parse of "label: description" lines. Bullets ("-", "*", "•") and
// numbering ("1.", "2)") are stripped, square brackets around the label are
// removed, lines without a non-empty label and description are ignored, and
// a "None" label is dropped.
std::vector<TopicLine> ParseTopicLines(std::string_view text);

// The generation prompt for the current pool.
lm::PromptRequest BuildGenerationPrompt(const Document &doc, const TopicPool &pool,
                                        GenerationMode mode, std::string_view model_id = {});

// The assignment prompt listing the full pool.
lm::PromptRequest BuildAssignmentPrompt(const Document &doc, const TopicPool &pool,
                                        std::string_view model_id = {});

struct TgliteOptions {
  std::string model_id;
  GenerationMode mode = GenerationMode::kSingle;
  lm::RetryPolicy retry;
  std::size_t max_in_flight = 4;
  bool omit_system_prompt = false;
};

// Sequential pool growth over `sample`. In single mode only the first parsed
// line of each response counts. Failed requests skip the document.
TopicPool GenerateTopics(std::span<const Document> sample, lm::ChatClient &client,
                         const TgliteOptions &options);

// Keeps pool labels in response order, dropping unknown labels and repeats.
// Throws DataError for an empty pool. `diagnostics` is updated if given.
TopicAssignment AssignTopics(const Document &doc, const TopicPool &pool,
                             lm::ChatClient &client, const TgliteOptions &options,
                             AssignmentDiagnostics *diagnostics = nullptr);

// Assigns every document with bounded concurrency; output in input order.
std::vector<TopicAssignment> AssignTopicsBatch(std::span<const Document> docs,
                                               const TopicPool &pool,
                                               lm::ChatClient &client,
                                               const TgliteOptions &options,
                                               AssignmentDiagnostics *diagnostics = nullptr);

struct LabelScore {
  std::string label;
  double mrr = 0.0;
};

// Mean over assignments of 1/rank (0 when unassigned) for every pool label,
// highest first; pool order breaks ties. Throws DataError when empty.
std::vector<LabelScore> MrrProminence(std::span<const TopicAssignment> assignments,
                                      const TopicPool &pool);

// Distinct labels used by at least one assignment (the effective k).
std::size_t AssignedTopicCount(std::span<const TopicAssignment> assignments);

}  // namespace retell::tglite

#endif  // RETELL_TGLITE_H_
