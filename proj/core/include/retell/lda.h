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

#ifndef RETELL_LDA_H_
#define RETELL_LDA_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "retell/preprocess.h"
#include "retell/rng.h"

namespace retell::lda {

struct LdaConfig {
  int k = 50;
  double alpha = 0.1;  // per topic
  double beta = 0.01;  // per term
  int iterations = 1000;
  int burn_in = 0;  // kept for completeness; estimates use the final sweep
  uint64_t seed = 1;

  // alpha = 5/k and beta = 0.01, the usual Mallet settings.
  static LdaConfig WithDefaults(int k);

  // Throws ConfigError unless k >= 2, alpha, beta > 0 and
  // iterations > burn_in >= 0.
  void Validate() const;
};

// Sufficient statistics of a collapsed Gibbs chain plus the token layout.
class LdaModel {
 public:
  LdaModel() = default;
  // Rebuilds every count from the assignments. `words[d]` and
  // `assignments[d]` must have equal lengths.
  LdaModel(LdaConfig config, std::size_t vocab_size, std::vector<std::string> doc_ids,
           std::vector<std::vector<preprocess::TermId>> words,
           std::vector<std::vector<uint32_t>> assignments);

  const LdaConfig &config() const { return config_; }
  int num_topics() const { return config_.k; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t num_docs() const { return words_.size(); }
  const std::vector<std::string> &doc_ids() const { return doc_ids_; }

  int32_t doc_topic(std::size_t d, int t) const { return n_dk_[d * config_.k + t]; }
  int32_t topic_word(int t, preprocess::TermId w) const {
    return n_wk_[static_cast<std::size_t>(w) * config_.k + t];
  }
  int32_t topic_total(int t) const { return n_k_[t]; }
  std::size_t doc_length(std::size_t d) const { return words_[d].size(); }

  const std::vector<std::vector<preprocess::TermId>> &words() const { return words_; }
  const std::vector<std::vector<uint32_t>> &assignments() const { return z_; }

 private:
  friend class GibbsSampler;

  LdaConfig config_;
  std::size_t vocab_size_ = 0;
  std::vector<std::string> doc_ids_;
  std::vector<std::vector<preprocess::TermId>> words_;
  std::vector<std::vector<uint32_t>> z_;
  std::vector<int32_t> n_dk_;  // doc-major, D x K
  std::vector<int32_t> n_wk_;  // word-major, V x K
  std::vector<int32_t> n_k_;
};

// One chain. Tokens of each document are laid out in term-id order and
// initial topics are drawn uniformly from the seed.
class GibbsSampler {
 public:
  GibbsSampler(std::span<const preprocess::BowDoc> docs, std::size_t vocab_size,
               const LdaConfig &config);

  // Resamples every token once, in document then token order.
  void Sweep();

  int sweeps() const { return sweeps_; }
  const LdaModel &model() const { return model_; }
  LdaModel TakeModel() { return std::move(model_); }

 private:
  LdaModel model_;
  Rng rng_;
  std::vector<double> cumulative_;
  int sweeps_ = 0;
};

// Called after every sweep with the 1-based sweep number.
using SweepObserver = std::function<void(int sweep, const LdaModel &model)>;

// Runs config.iterations sweeps. Throws DataError if every document is empty.
LdaModel Train(std::span<const preprocess::BowDoc> docs, std::size_t vocab_size,
               const LdaConfig &config, const SweepObserver &observer = {});

struct DocTopicDist {
  std::string doc_id;
  std::vector<double> probs;
};

// (n_dk + alpha) / (len + k alpha). Empty documents give the uniform vector.
DocTopicDist DocTopicDistribution(const LdaModel &model, std::size_t doc);
std::vector<DocTopicDist> DocTopicDistributions(const LdaModel &model);

// Topic indices by descending probability, lower index first on ties.
std::vector<int> RankTopics(const DocTopicDist &dist);

// The n terms with the highest topic-word count (n_kw + beta), ties broken
// lexicographically. Returns every term when n exceeds the vocabulary.
std::vector<std::string> TopicTopWords(const LdaModel &model,
                                       const preprocess::Vocabulary &vocab, int topic,
                                       std::size_t n = 5);

struct TopicScore {
  int topic = 0;
  double mean_prob = 0.0;
};

// Every topic with its mean probability over `dists`, highest first, lower
// index first on ties. Throws DataError on an empty set or mixed k.
std::vector<TopicScore> RankTopicsByMeanProbability(std::span<const DocTopicDist> dists);

TopicScore MostProminentTopic(std::span<const DocTopicDist> dists);

}  // namespace retell::lda

#endif  // RETELL_LDA_H_
