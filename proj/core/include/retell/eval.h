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

#ifndef RETELL_EVAL_H_
#define RETELL_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "retell/lda.h"
#include "retell/rng.h"
#include "retell/tglite.h"

namespace retell::eval {

struct GoldEntry {
  std::string source;  // goodreads, litcharts or sparknotes
  std::set<std::string> topics;  // coarse recoded topics
  std::set<std::string> tags;    // fine source-specific labels
};

using GoldLabels = std::map<std::string, GoldEntry>;

// One JSON object per line: {"passage_id", "source", "topics", "tags"}.
GoldLabels LoadGoldLabels(const std::filesystem::path &path);

// passage_id -> ranked topic identifiers, most prominent first.
using Prediction = std::map<std::string, std::vector<std::string>>;

// Ranks every topic of each distribution; identifiers are topic indices.
Prediction PredictionFromLda(std::span<const lda::DocTopicDist> dists);
Prediction PredictionFromAssignments(std::span<const tglite::TopicAssignment> assignments);

struct PairMetric {
  double value = 0.0;
  std::size_t hits = 0;
  std::size_t pairs = 0;
  // Per-pair outcomes, kept for bootstrap resampling.
  std::vector<uint8_t> outcomes;
};

// Among unordered pairs of gold-labeled passages with the same top-1
// prediction, the fraction sharing a gold topic. Passages without gold
// labels or predictions are ignored. Throws DataError when fewer than two
// passages qualify or no pair shares a top-1 prediction.
PairMetric PairwisePrecision(const Prediction &preds, const GoldLabels &gold);

// Among pairs of predicted passages sharing a gold tag, the fraction whose
// top-3 predictions intersect (fewer than 3 predictions: all of them; none:
// never recalled). Passages absent from `preds` or without gold tags are
// ignored. Throws DataError when no pair shares a tag.
PairMetric PairwiseRecall(const Prediction &preds, const GoldLabels &gold);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Percentile bootstrap (95%) of the mean of 0/1 pair outcomes.
Interval BootstrapInterval(std::span<const uint8_t> outcomes, std::size_t resamples,
                           uint64_t seed);

// Topics that are top-1 for some document, with the number of such
// documents.
class TopRankIndex {
 public:
  explicit TopRankIndex(const Prediction &preds);

  // True when `topic` is top-1 for a document other than `doc_id`.
  bool TopRankedElsewhere(const std::string &topic, const std::string &doc_id) const;

 private:
  std::map<std::string, std::size_t> counts_;
  std::map<std::string, std::string> top_of_doc_;
};

// LDA form: uniform over the last floor(k/2) topics of RankTopics(dist)
// that are top-1 for another document. Requires k >= 8. Returns a topic
// index.
int SampleIntruder(const lda::DocTopicDist &dist, const TopRankIndex &population, Rng &rng);

// Direct-labeling form: uniform over pool labels not assigned to the
// document that are top-1 for another document.
std::string SampleIntruder(const tglite::TopicAssignment &assignment,
                           const tglite::TopicPool &pool, const TopRankIndex &population,
                           Rng &rng);

// The candidate sets the two samplers draw from (exposed for audits).
std::vector<int> EligibleIntruders(const lda::DocTopicDist &dist,
                                   const TopRankIndex &population);
std::vector<std::string> EligibleIntruders(const tglite::TopicAssignment &assignment,
                                           const tglite::TopicPool &pool,
                                           const TopRankIndex &population);

struct IntruderItem {
  std::string passage_id;
  std::vector<std::string> shown_topics;  // up to 3 top topics + intruder, shuffled
  std::size_t intruder_index = 0;
};

// Shuffles the top topics with the intruder.
IntruderItem MakeIntruderItem(std::string passage_id, std::vector<std::string> top_topics,
                              std::string intruder, Rng &rng);

struct PrPoint {
  double cutoff = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t predicted = 0;
  std::size_t true_positives = 0;
};

using PrCurve = std::vector<PrPoint>;

// Predicted positive: max over target topics of the passage probability is
// at least the cutoff. Cutoffs must be strictly increasing and inside
// (0, 1). Cutoffs with no predicted passage are skipped.
PrCurve ThresholdPrCurve(std::span<const lda::DocTopicDist> dists,
                         const std::set<int> &target_topics,
                         const std::set<std::string> &positives,
                         std::span<const double> cutoffs);

// Jensen-Shannon divergence in nats. Both inputs must sum to 1 within 1e-9
// and have equal length.
double Jsd(std::span<const double> p, std::span<const double> q);

using WordDistribution = std::map<std::string, double>;

// Relative token frequencies over all documents.
WordDistribution MakeWordDistribution(std::span<const std::vector<std::string>> docs);

// JSD over the union vocabulary of two word distributions.
double Jsd(const WordDistribution &p, const WordDistribution &q);

}  // namespace retell::eval

#endif  // RETELL_EVAL_H_
