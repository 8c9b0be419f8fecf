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

#include "retell/lda.h"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "retell/error.h"

namespace retell::lda {

using preprocess::TermId;

LdaConfig LdaConfig::WithDefaults(int k) {
  LdaConfig config;
  config.k = k;
  config.alpha = 5.0 / static_cast<double>(k);
  config.beta = 0.01;
  return config;
}

void LdaConfig::Validate() const {
  if (k < 2) throw ConfigError(fmt::format("LDA needs k >= 2 (got {})", k));
  if (!(alpha > 0.0)) throw ConfigError("LDA alpha must be positive");
  if (!(beta > 0.0)) throw ConfigError("LDA beta must be positive");
  if (burn_in < 0 || iterations <= burn_in) {
    throw ConfigError(fmt::format("LDA needs iterations > burn_in >= 0 (got {} and {})",
                                  iterations, burn_in));
  }
}

LdaModel::LdaModel(LdaConfig config, std::size_t vocab_size,
                   std::vector<std::string> doc_ids,
                   std::vector<std::vector<TermId>> words,
                   std::vector<std::vector<uint32_t>> assignments)
    : config_(config),
      vocab_size_(vocab_size),
      doc_ids_(std::move(doc_ids)),
      words_(std::move(words)),
      z_(std::move(assignments)) {
  config_.Validate();
  const std::size_t k = static_cast<std::size_t>(config_.k);
  if (doc_ids_.size() != words_.size() || z_.size() != words_.size()) {
    throw DataError("LDA model: documents, ids and assignments disagree in size");
  }
  n_dk_.assign(words_.size() * k, 0);
  n_wk_.assign(vocab_size_ * k, 0);
  n_k_.assign(k, 0);
  for (std::size_t d = 0; d < words_.size(); ++d) {
    if (words_[d].size() != z_[d].size()) {
      throw DataError(fmt::format("LDA model: document {} has {} tokens but {} assignments",
                                  d, words_[d].size(), z_[d].size()));
    }
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      const TermId w = words_[d][i];
      const uint32_t t = z_[d][i];
      if (w >= vocab_size_ || t >= k) {
        throw DataError(fmt::format("LDA model: token {} of document {} out of range", i, d));
      }
      ++n_dk_[d * k + t];
      ++n_wk_[w * k + t];
      ++n_k_[t];
    }
  }
}

GibbsSampler::GibbsSampler(std::span<const preprocess::BowDoc> docs,
                           std::size_t vocab_size, const LdaConfig &config)
    : rng_(config.seed) {
  config.Validate();
  if (docs.empty()) throw DataError("cannot train LDA on an empty corpus");
  if (vocab_size < static_cast<std::size_t>(config.k)) {
    spdlog::warn("vocabulary size {} is smaller than k = {}", vocab_size, config.k);
  }
  std::vector<std::string> ids;
  std::vector<std::vector<TermId>> words;
  std::vector<std::vector<uint32_t>> z;
  ids.reserve(docs.size());
  words.reserve(docs.size());
  z.reserve(docs.size());
  std::size_t tokens = 0;
  for (const preprocess::BowDoc &doc : docs) {
    ids.push_back(doc.doc_id);
    std::vector<TermId> &layout = words.emplace_back();
    std::vector<uint32_t> &topics = z.emplace_back();
    for (const auto &[w, count] : doc.counts) {
      if (w >= vocab_size) {
        throw DataError(fmt::format("document {} uses term id {} outside vocabulary of {}",
                                    doc.doc_id, w, vocab_size));
      }
      for (uint32_t c = 0; c < count; ++c) {
        layout.push_back(w);
        topics.push_back(static_cast<uint32_t>(rng_.UniformInt(config.k)));
      }
    }
    tokens += layout.size();
  }
  if (tokens == 0) throw DataError("cannot train LDA: every document is empty");
  model_ = LdaModel(config, vocab_size, std::move(ids), std::move(words), std::move(z));
  cumulative_.resize(config.k);
}

void GibbsSampler::Sweep() {
  LdaModel &m = model_;
  const int k = m.config_.k;
  const double alpha = m.config_.alpha;
  const double beta = m.config_.beta;
  const double vocab_beta = static_cast<double>(m.vocab_size_) * beta;
  for (std::size_t d = 0; d < m.words_.size(); ++d) {
    int32_t *doc_counts = &m.n_dk_[d * k];
    const std::vector<TermId> &words = m.words_[d];
    std::vector<uint32_t> &topics = m.z_[d];
    for (std::size_t i = 0; i < words.size(); ++i) {
      int32_t *word_counts = &m.n_wk_[static_cast<std::size_t>(words[i]) * k];
      const uint32_t old_topic = topics[i];
      --doc_counts[old_topic];
      --word_counts[old_topic];
      --m.n_k_[old_topic];

      double total = 0.0;
      for (int t = 0; t < k; ++t) {
        total += (doc_counts[t] + alpha) * (word_counts[t] + beta) /
                 (m.n_k_[t] + vocab_beta);
        cumulative_[t] = total;
      }
      const double u = rng_.Uniform() * total;
      int new_topic = 0;
      while (new_topic < k - 1 && cumulative_[new_topic] <= u) ++new_topic;

      topics[i] = static_cast<uint32_t>(new_topic);
      ++doc_counts[new_topic];
      ++word_counts[new_topic];
      ++m.n_k_[new_topic];
    }
  }
  ++sweeps_;
}

LdaModel Train(std::span<const preprocess::BowDoc> docs, std::size_t vocab_size,
               const LdaConfig &config, const SweepObserver &observer) {
  GibbsSampler sampler(docs, vocab_size, config);
  for (int sweep = 1; sweep <= config.iterations; ++sweep) {
    sampler.Sweep();
    if (observer) observer(sweep, sampler.model());
  }
  return sampler.TakeModel();
}

DocTopicDist DocTopicDistribution(const LdaModel &model, std::size_t doc) {
  const int k = model.num_topics();
  const double alpha = model.config().alpha;
  const double denominator = static_cast<double>(model.doc_length(doc)) + k * alpha;
  DocTopicDist dist;
  dist.doc_id = model.doc_ids().at(doc);
  dist.probs.resize(k);
  for (int t = 0; t < k; ++t) {
    dist.probs[t] = (model.doc_topic(doc, t) + alpha) / denominator;
  }
  return dist;
}

std::vector<DocTopicDist> DocTopicDistributions(const LdaModel &model) {
  std::vector<DocTopicDist> dists;
  dists.reserve(model.num_docs());
  for (std::size_t d = 0; d < model.num_docs(); ++d) {
    dists.push_back(DocTopicDistribution(model, d));
  }
  return dists;
}

std::vector<int> RankTopics(const DocTopicDist &dist) {
  std::vector<int> order(dist.probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist.probs[a] > dist.probs[b]; });
  return order;
}

std::vector<std::string> TopicTopWords(const LdaModel &model,
                                       const preprocess::Vocabulary &vocab, int topic,
                                       std::size_t n) {
  if (topic < 0 || topic >= model.num_topics()) {
    throw DataError(fmt::format("topic {} out of range", topic));
  }
  if (vocab.size() != model.vocab_size()) {
    throw DataError("vocabulary does not match the model");
  }
  std::vector<TermId> ids(vocab.size());
  std::iota(ids.begin(), ids.end(), TermId{0});
  const std::size_t take = std::min(n, ids.size());
  // Adding beta to every count does not change the order.
  std::partial_sort(ids.begin(), ids.begin() + take, ids.end(), [&](TermId a, TermId b) {
    const int32_t ca = model.topic_word(topic, a);
    const int32_t cb = model.topic_word(topic, b);
    if (ca != cb) return ca > cb;
    return vocab.term(a) < vocab.term(b);
  });
  std::vector<std::string> words;
  words.reserve(take);
  for (std::size_t i = 0; i < take; ++i) words.push_back(vocab.term(ids[i]));
  return words;
}

std::vector<TopicScore> RankTopicsByMeanProbability(std::span<const DocTopicDist> dists) {
  if (dists.empty()) throw DataError("topic prominence needs at least one passage");
  const std::size_t k = dists.front().probs.size();
  std::vector<double> sums(k, 0.0);
  for (const DocTopicDist &dist : dists) {
    if (dist.probs.size() != k) {
      throw DataError("topic prominence: distributions disagree on k");
    }
    for (std::size_t t = 0; t < k; ++t) sums[t] += dist.probs[t];
  }
  std::vector<TopicScore> scores(k);
  for (std::size_t t = 0; t < k; ++t) {
    scores[t] = {static_cast<int>(t), sums[t] / static_cast<double>(dists.size())};
  }
  std::stable_sort(scores.begin(), scores.end(), [](const TopicScore &a, const TopicScore &b) {
    return a.mean_prob > b.mean_prob;
  });
  return scores;
}

TopicScore MostProminentTopic(std::span<const DocTopicDist> dists) {
  return RankTopicsByMeanProbability(dists).front();
}

}  // namespace retell::lda
