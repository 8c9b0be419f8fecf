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

#include "retell/eval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "json.hpp"
#include "retell/error.h"

namespace retell::eval {

GoldLabels LoadGoldLabels(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot read gold labels {}", path.string()));
  GoldLabels gold;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      GoldEntry entry;
      entry.source = record.value("source", "");
      for (const auto &topic : record.at("topics")) entry.topics.insert(topic.get<std::string>());
      for (const auto &tag : record.value("tags", nlohmann::json::array())) {
        entry.tags.insert(tag.get<std::string>());
      }
      gold[record.at("passage_id").get<std::string>()] = std::move(entry);
    } catch (const nlohmann::json::exception &e) {
      throw DataError(fmt::format("{}:{}: bad gold record: {}", path.string(), line_number,
                                  e.what()));
    }
  }
  return gold;
}

Prediction PredictionFromLda(std::span<const lda::DocTopicDist> dists) {
  Prediction preds;
  for (const lda::DocTopicDist &dist : dists) {
    std::vector<std::string> &ranked = preds[dist.doc_id];
    for (int t : lda::RankTopics(dist)) ranked.push_back(std::to_string(t));
  }
  return preds;
}

Prediction PredictionFromAssignments(std::span<const tglite::TopicAssignment> assignments) {
  Prediction preds;
  for (const tglite::TopicAssignment &assignment : assignments) {
    preds[assignment.doc_id] = assignment.ranked_labels;
  }
  return preds;
}

namespace {

bool Intersects(const std::set<std::string> &a, const std::set<std::string> &b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return true;
    if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return false;
}

void Finish(PairMetric &metric) {
  metric.pairs = metric.outcomes.size();
  metric.hits = static_cast<std::size_t>(
      std::count(metric.outcomes.begin(), metric.outcomes.end(), uint8_t{1}));
  metric.value = static_cast<double>(metric.hits) / static_cast<double>(metric.pairs);
}

}  // namespace

PairMetric PairwisePrecision(const Prediction &preds, const GoldLabels &gold) {
  // Group gold-labeled passages by their top-1 prediction.
  std::map<std::string, std::vector<const GoldEntry *>> groups;
  std::size_t labeled = 0;
  for (const auto &[passage_id, ranked] : preds) {
    auto it = gold.find(passage_id);
    if (it == gold.end() || it->second.topics.empty() || ranked.empty()) continue;
    groups[ranked.front()].push_back(&it->second);
    ++labeled;
  }
  if (labeled < 2) {
    throw DataError(fmt::format("pairwise precision needs two labeled passages (found {})",
                                labeled));
  }
  PairMetric metric;
  for (const auto &[topic, members] : groups) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        metric.outcomes.push_back(Intersects(members[i]->topics, members[j]->topics) ? 1 : 0);
      }
    }
  }
  if (metric.outcomes.empty()) {
    throw DataError("pairwise precision undefined: no two passages share a top-1 topic");
  }
  Finish(metric);
  return metric;
}

PairMetric PairwiseRecall(const Prediction &preds, const GoldLabels &gold) {
  struct Item {
    const GoldEntry *gold;
    std::set<std::string> top3;
  };
  std::vector<Item> items;
  for (const auto &[passage_id, ranked] : preds) {
    auto it = gold.find(passage_id);
    if (it == gold.end() || it->second.tags.empty()) continue;
    const std::size_t take = std::min<std::size_t>(3, ranked.size());
    items.push_back({&it->second, std::set<std::string>(ranked.begin(), ranked.begin() + take)});
  }
  if (items.size() < 2) {
    throw DataError(fmt::format("pairwise recall needs two tagged passages (found {})",
                                items.size()));
  }

  std::map<std::string, std::vector<std::size_t>> by_tag;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (const std::string &tag : items[i].gold->tags) by_tag[tag].push_back(i);
  }
  PairMetric metric;
  std::vector<std::size_t> stamp(items.size(), SIZE_MAX);
  std::vector<std::size_t> partners;
  for (std::size_t i = 0; i < items.size(); ++i) {
    partners.clear();
    for (const std::string &tag : items[i].gold->tags) {
      for (std::size_t j : by_tag[tag]) {
        if (j > i && stamp[j] != i) {
          stamp[j] = i;
          partners.push_back(j);
        }
      }
    }
    std::sort(partners.begin(), partners.end());
    for (std::size_t j : partners) {
      metric.outcomes.push_back(Intersects(items[i].top3, items[j].top3) ? 1 : 0);
    }
  }
  if (metric.outcomes.empty()) {
    throw DataError("pairwise recall undefined: no two passages share a gold tag");
  }
  Finish(metric);
  return metric;
}

Interval BootstrapInterval(std::span<const uint8_t> outcomes, std::size_t resamples,
                           uint64_t seed) {
  if (outcomes.empty() || resamples == 0) return {};
  Rng rng(seed);
  std::vector<double> means(resamples);
  const std::size_t n = outcomes.size();
  for (double &mean : means) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += outcomes[rng.UniformInt(n)];
    mean = static_cast<double>(hits) / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const auto at = [&](double q) {
    const auto index = static_cast<std::size_t>(std::floor(q * static_cast<double>(resamples - 1)));
    return means[std::min(index, resamples - 1)];
  };
  return {at(0.025), at(0.975)};
}

TopRankIndex::TopRankIndex(const Prediction &preds) {
  for (const auto &[doc_id, ranked] : preds) {
    if (ranked.empty()) continue;
    ++counts_[ranked.front()];
    top_of_doc_[doc_id] = ranked.front();
  }
}

bool TopRankIndex::TopRankedElsewhere(const std::string &topic,
                                      const std::string &doc_id) const {
  auto it = counts_.find(topic);
  if (it == counts_.end()) return false;
  std::size_t count = it->second;
  auto own = top_of_doc_.find(doc_id);
  if (own != top_of_doc_.end() && own->second == topic) --count;
  return count > 0;
}

std::vector<int> EligibleIntruders(const lda::DocTopicDist &dist,
                                   const TopRankIndex &population) {
  const int k = static_cast<int>(dist.probs.size());
  if (k < 8) {
    throw DataError(fmt::format("intruder sampling needs k >= 8 (got {})", k));
  }
  // The tail of the same ranking that picks the shown top topics, so ties
  // can never put one topic in both places.
  const std::vector<int> ranking = lda::RankTopics(dist);
  std::vector<int> eligible;
  for (int i = k - k / 2; i < k; ++i) {
    const int t = ranking[i];
    if (population.TopRankedElsewhere(std::to_string(t), dist.doc_id)) eligible.push_back(t);
  }
  std::sort(eligible.begin(), eligible.end());
  if (eligible.empty()) {
    throw DataError(fmt::format(
        "no intruder for {}: no bottom-half topic is top-ranked for another document",
        dist.doc_id));
  }
  return eligible;
}

int SampleIntruder(const lda::DocTopicDist &dist, const TopRankIndex &population, Rng &rng) {
  const std::vector<int> eligible = EligibleIntruders(dist, population);
  return eligible[rng.UniformInt(eligible.size())];
}

std::vector<std::string> EligibleIntruders(const tglite::TopicAssignment &assignment,
                                           const tglite::TopicPool &pool,
                                           const TopRankIndex &population) {
  std::set<std::string> assigned;
  for (const std::string &label : assignment.ranked_labels) {
    assigned.insert(tglite::NormalizeLabel(label));
  }
  std::vector<std::string> unassigned;
  for (const tglite::PoolTopic &topic : pool.topics()) {
    if (!assigned.contains(tglite::NormalizeLabel(topic.label))) unassigned.push_back(topic.label);
  }
  if (unassigned.empty()) {
    throw DataError(fmt::format(
        "no intruder for {}: every pool topic is assigned to the passage", assignment.doc_id));
  }
  std::vector<std::string> eligible;
  for (const std::string &label : unassigned) {
    if (population.TopRankedElsewhere(label, assignment.doc_id)) eligible.push_back(label);
  }
  if (eligible.empty()) {
    throw DataError(fmt::format(
        "no intruder for {}: no unassigned topic is top-ranked for another document",
        assignment.doc_id));
  }
  return eligible;
}

std::string SampleIntruder(const tglite::TopicAssignment &assignment,
                           const tglite::TopicPool &pool, const TopRankIndex &population,
                           Rng &rng) {
  const std::vector<std::string> eligible = EligibleIntruders(assignment, pool, population);
  return eligible[rng.UniformInt(eligible.size())];
}

IntruderItem MakeIntruderItem(std::string passage_id, std::vector<std::string> top_topics,
                              std::string intruder, Rng &rng) {
  if (top_topics.size() > 3) top_topics.resize(3);
  std::vector<std::pair<std::string, bool>> shown;
  for (std::string &topic : top_topics) shown.emplace_back(std::move(topic), false);
  shown.emplace_back(std::move(intruder), true);
  rng.Shuffle(shown);
  IntruderItem item;
  item.passage_id = std::move(passage_id);
  for (std::size_t i = 0; i < shown.size(); ++i) {
    if (shown[i].second) item.intruder_index = i;
    item.shown_topics.push_back(std::move(shown[i].first));
  }
  return item;
}

PrCurve ThresholdPrCurve(std::span<const lda::DocTopicDist> dists,
                         const std::set<int> &target_topics,
                         const std::set<std::string> &positives,
                         std::span<const double> cutoffs) {
  if (positives.empty()) throw DataError("PR curve needs at least one positive passage");
  if (target_topics.empty()) throw DataError("PR curve needs at least one target topic");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 0.0 && cutoffs[i] < 1.0)) {
      throw DataError(fmt::format("cutoff {} is outside (0, 1)", cutoffs[i]));
    }
    if (i > 0 && !(cutoffs[i] > cutoffs[i - 1])) {
      throw DataError("cutoffs must be strictly increasing");
    }
  }
  std::vector<double> scores;
  std::vector<bool> positive;
  scores.reserve(dists.size());
  for (const lda::DocTopicDist &dist : dists) {
    double best = 0.0;
    for (int t : target_topics) {
      if (t < 0 || static_cast<std::size_t>(t) >= dist.probs.size()) {
        throw DataError(fmt::format("target topic {} out of range", t));
      }
      best = std::max(best, dist.probs[t]);
    }
    scores.push_back(best);
    positive.push_back(positives.contains(dist.doc_id));
  }
  PrCurve curve;
  for (double cutoff : cutoffs) {
    PrPoint point;
    point.cutoff = cutoff;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] < cutoff) continue;
      ++point.predicted;
      if (positive[i]) ++point.true_positives;
    }
    if (point.predicted == 0) continue;
    point.precision = static_cast<double>(point.true_positives) / static_cast<double>(point.predicted);
    point.recall = static_cast<double>(point.true_positives) / static_cast<double>(positives.size());
    curve.push_back(point);
  }
  return curve;
}

namespace {

void CheckDistribution(std::span<const double> p, const char *name) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw DataError(fmt::format("JSD: {} has a negative or NaN entry", name));
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DataError(fmt::format("JSD: {} sums to {:.12f}, not 1", name, total));
  }
}

double KlToMixture(std::span<const double> p, std::span<const double> q) {
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    kl += p[i] * std::log(p[i] / (0.5 * (p[i] + q[i])));
  }
  return kl;
}

}  // namespace

double Jsd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DataError("JSD: distributions differ in length");
  CheckDistribution(p, "p");
  CheckDistribution(q, "q");
  return std::max(0.0, 0.5 * KlToMixture(p, q) + 0.5 * KlToMixture(q, p));
}

WordDistribution MakeWordDistribution(std::span<const std::vector<std::string>> docs) {
  WordDistribution dist;
  std::size_t total = 0;
  for (const std::vector<std::string> &doc : docs) {
    for (const std::string &token : doc) {
      dist[token] += 1.0;
      ++total;
    }
  }
  if (total == 0) throw DataError("word distribution over zero tokens");
  for (auto &[term, mass] : dist) mass /= static_cast<double>(total);
  return dist;
}

double Jsd(const WordDistribution &p, const WordDistribution &q) {
  std::vector<double> pv;
  std::vector<double> qv;
  auto ip = p.begin();
  auto iq = q.begin();
  while (ip != p.end() || iq != q.end()) {
    if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
      pv.push_back(ip->second);
      qv.push_back(0.0);
      ++ip;
    } else if (ip == p.end() || iq->first < ip->first) {
      pv.push_back(0.0);
      qv.push_back(iq->second);
      ++iq;
    } else {
      pv.push_back(ip->second);
      qv.push_back(iq->second);
      ++ip;
      ++iq;
    }
  }
  return Jsd(pv, qv);
}

}  // namespace retell::eval
