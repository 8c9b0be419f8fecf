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

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "retell/error.h"
#include "retell/eval.h"

namespace retell::eval {
namespace {

GoldEntry Gold(std::set<std::string> topics, std::set<std::string> tags = {}) {
  return {"litcharts", std::move(topics), std::move(tags)};
}

TEST(PairwisePrecision, Examples) {
  const Prediction preds = {{"p1", {"A"}}, {"p2", {"A"}}, {"p3", {"B"}}};
  const GoldLabels gold = {{"p1", Gold({"x"})}, {"p2", Gold({"x", "y"})}, {"p3", Gold({"y"})}};
  const PairMetric m = PairwisePrecision(preds, gold);
  EXPECT_DOUBLE_EQ(m.value, 1.0);
  EXPECT_EQ(m.pairs, 1u);
  const PairMetric zero =
      PairwisePrecision({{"a", {"A"}}, {"b", {"A"}}}, {{"a", Gold({"x"})}, {"b", Gold({"y"})}});
  EXPECT_DOUBLE_EQ(zero.value, 0.0);
}

TEST(PairwisePrecision, Errors) {
  EXPECT_THROW(PairwisePrecision({{"a", {"A"}}}, {{"a", Gold({"x"})}}), DataError);
  EXPECT_THROW(PairwisePrecision({{"a", {"A"}}, {"b", {"B"}}}, {{"a", Gold({"x"})}, {"b", Gold({"x"})}}),
               DataError);
}

TEST(PairwiseRecall, Examples) {
  const GoldLabels gold = {{"a", Gold({"t"}, {"unrequited-love"})},
                           {"b", Gold({"t"}, {"unrequited-love"})}};
  EXPECT_DOUBLE_EQ(PairwiseRecall({{"a", {"A", "B", "C"}}, {"b", {"C", "D", "E"}}}, gold).value, 1.0);
  EXPECT_DOUBLE_EQ(PairwiseRecall({{"a", {"A", "B", "C"}}, {"b", {"D", "E", "F"}}}, gold).value, 0.0);
  // Only the top three count.
  EXPECT_DOUBLE_EQ(PairwiseRecall({{"a", {"A", "B", "C", "Z"}}, {"b", {"D", "E", "Z"}}}, gold).value,
                   0.0);
  EXPECT_DOUBLE_EQ(PairwiseRecall({{"a", {"Z"}}, {"b", {"D", "E", "Z"}}}, gold).value, 1.0);
  EXPECT_THROW(PairwiseRecall({{"a", {"A"}}, {"b", {"A"}}},
                              {{"a", Gold({"t"}, {"x"})}, {"b", Gold({"t"}, {"y"})}}),
               DataError);
}

struct Instance {
  Prediction preds;
  GoldLabels gold;
};

Instance RandomInstance(std::mt19937 &gen) {
  std::uniform_int_distribution<int> n_passages(2, 20), n_topics(1, 6), n_tags(1, 8);
  const int passages = n_passages(gen), topics = n_topics(gen), tags = n_tags(gen);
  Instance inst;
  for (int i = 0; i < passages; ++i) {
    const std::string id = "p" + std::to_string(i);
    std::vector<std::string> ranked;
    for (int t = 0; t < topics; ++t) ranked.push_back("T" + std::to_string(t));
    std::shuffle(ranked.begin(), ranked.end(), gen);
    ranked.resize(1 + gen() % topics);
    inst.preds[id] = ranked;
    GoldEntry entry = Gold({});
    for (int r = 1 + gen() % 2; r > 0; --r) entry.topics.insert("Y" + std::to_string(gen() % 4));
    for (int r = 1 + gen() % 2; r > 0; --r) entry.tags.insert("Z" + std::to_string(gen() % tags));
    inst.gold[id] = entry;
  }
  return inst;
}

TEST(PairMetrics, MatchBruteForceOracle) {
  std::mt19937 gen(77);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = RandomInstance(gen);
    const PairMetric bp = retell::testing::BrutePrecision(inst.preds, inst.gold);
    if (bp.pairs > 0) {
      const PairMetric p = PairwisePrecision(inst.preds, inst.gold);
      EXPECT_EQ(p.hits, bp.hits);
      EXPECT_EQ(p.pairs, bp.pairs);
      EXPECT_EQ(p.value, bp.value);
      EXPECT_EQ(p.outcomes.size(), p.pairs);
      ++compared;
    } else {
      EXPECT_THROW(PairwisePrecision(inst.preds, inst.gold), DataError);
    }
    const PairMetric br = retell::testing::BruteRecall(inst.preds, inst.gold);
    if (br.pairs > 0) {
      const PairMetric r = PairwiseRecall(inst.preds, inst.gold);
      EXPECT_EQ(r.hits, br.hits);
      EXPECT_EQ(r.pairs, br.pairs);
      EXPECT_EQ(r.value, br.value);
    } else {
      EXPECT_THROW(PairwiseRecall(inst.preds, inst.gold), DataError);
    }
  }
  EXPECT_GT(compared, 200);
}

TEST(PairMetrics, InvariantUnderTopicRelabeling) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    Instance inst = RandomInstance(gen);
    std::vector<std::string> names = {"T0", "T1", "T2", "T3", "T4", "T5"};
    std::vector<std::string> perm = names;
    std::shuffle(perm.begin(), perm.end(), gen);
    Prediction relabeled;
    for (const auto &[id, ranked] : inst.preds) {
      for (const auto &t : ranked) relabeled[id].push_back("R" + perm[t[1] - '0']);
    }
    try {
      EXPECT_EQ(PairwisePrecision(inst.preds, inst.gold).value,
                PairwisePrecision(relabeled, inst.gold).value);
    } catch (const DataError &) {
      EXPECT_THROW(PairwisePrecision(relabeled, inst.gold), DataError);
    }
    try {
      EXPECT_EQ(PairwiseRecall(inst.preds, inst.gold).value,
                PairwiseRecall(relabeled, inst.gold).value);
    } catch (const DataError &) {
      EXPECT_THROW(PairwiseRecall(relabeled, inst.gold), DataError);
    }
  }
}

TEST(Bootstrap, DeterministicAndBracketsMean) {
  std::vector<uint8_t> outcomes(500);
  for (std::size_t i = 0; i < outcomes.size(); ++i) outcomes[i] = i % 3 == 0;
  const Interval a = BootstrapInterval(outcomes, 1000, 4);
  const Interval b = BootstrapInterval(outcomes, 1000, 4);
  EXPECT_EQ(a.low, b.low);
  EXPECT_EQ(a.high, b.high);
  const double mean = 167.0 / 500.0;
  EXPECT_LE(a.low, mean);
  EXPECT_GE(a.high, mean);
  EXPECT_LT(a.high - a.low, 0.15);
  const Interval constant = BootstrapInterval(std::vector<uint8_t>(10, 1), 100, 1);
  EXPECT_EQ(constant.low, 1.0);
  EXPECT_EQ(constant.high, 1.0);
}

lda::DocTopicDist Dist(const std::string &id, std::vector<double> probs) {
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double &p : probs) p /= sum;
  return {id, probs};
}

TEST(Intruders, LdaConstraintIntersection) {
  // Ranking [t3, t7, t1, t4, t6, then bottom five t0 t2 t5 t8 t9].
  const lda::DocTopicDist target =
      Dist("me", {0.01, 0.10, 0.02, 0.30, 0.09, 0.03, 0.08, 0.20, 0.04, 0.05});
  // t2 and t8 are top-1 elsewhere; t3 is top-1 only for "me".
  const Prediction population = {{"me", {"3"}}, {"o1", {"2"}}, {"o2", {"8"}}, {"o3", {"7"}}};
  const TopRankIndex index(population);
  EXPECT_EQ(EligibleIntruders(target, index), (std::vector<int>{2, 8}));
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const int t = SampleIntruder(target, index, rng);
    EXPECT_TRUE(t == 2 || t == 8);
  }
}

TEST(Intruders, LdaErrorsNameTheConstraint) {
  const Prediction population = {{"o1", {"7"}}};
  try {
    EligibleIntruders(Dist("me", {1, 2, 3, 4}), TopRankIndex(population));
    FAIL();
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("k >= 8"), std::string::npos);
  }
  try {
    EligibleIntruders(Dist("me", {1, 2, 3, 4, 5, 6, 7, 8}), TopRankIndex(population));
    FAIL();
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("top-ranked"), std::string::npos);
  }
}

TEST(Intruders, TiesNeverDuplicateShownTopics) {
  // One dominant topic and nine tied ones. RankTopics shows t5, t0 and t1;
  // the bottom half is t4, t6, t7, t8 and t9.
  const lda::DocTopicDist target = Dist("me", {1, 1, 1, 1, 1, 9, 1, 1, 1, 1});
  Prediction population = {{"me", {"5"}}};
  for (int t = 0; t < 10; ++t) population["o" + std::to_string(t)] = {std::to_string(t)};
  const TopRankIndex index(population);
  const std::vector<int> ranking = lda::RankTopics(target);
  const std::set<int> shown(ranking.begin(), ranking.begin() + 3);
  const std::vector<int> eligible = EligibleIntruders(target, index);
  EXPECT_EQ(eligible, (std::vector<int>{4, 6, 7, 8, 9}));
  for (int t : eligible) EXPECT_FALSE(shown.contains(t)) << t;
}

TEST(Intruders, TopRankedElsewhereExcludesSelf) {
  const TopRankIndex index({{"a", {"X"}}, {"b", {"X"}}, {"c", {"Y"}}});
  EXPECT_TRUE(index.TopRankedElsewhere("X", "a"));
  EXPECT_FALSE(index.TopRankedElsewhere("Y", "c"));
  EXPECT_TRUE(index.TopRankedElsewhere("Y", "a"));
  EXPECT_FALSE(index.TopRankedElsewhere("Z", "a"));
}

TEST(Intruders, TopicGptForm) {
  tglite::TopicPool pool;
  pool.Add({"Love", "", "x"});
  pool.Add({"War", "", "x"});
  pool.Add({"Family", "", "x"});
  const Prediction population = {{"me", {"Love"}}, {"o1", {"War", "Love"}}};
  Rng rng(3);
  EXPECT_EQ(SampleIntruder({"me", {"Love"}}, pool, TopRankIndex(population), rng), "War");
  EXPECT_THROW(EligibleIntruders({"me", {"Love", "War", "Family"}}, pool, TopRankIndex(population)),
               DataError);
  EXPECT_THROW(EligibleIntruders({"me", {"War"}}, pool, TopRankIndex(Prediction{{"me", {"War"}}})),
               DataError);
}

TEST(Intruders, UniformOverEligibleSet) {
  const lda::DocTopicDist target = Dist("me", {9, 8, 7, 6, 5, 1, 1, 1, 1, 0.5});
  const Prediction population = {{"o1", {"6"}}, {"o2", {"7"}}, {"o3", {"9"}}};
  const TopRankIndex index(population);
  ASSERT_EQ(EligibleIntruders(target, index).size(), 3u);
  Rng rng(2024);
  std::map<int, int> counts;
  const int draws = 3000;
  for (int i = 0; i < draws; ++i) ++counts[SampleIntruder(target, index, rng)];
  double chi2 = 0.0;
  for (const auto &[t, c] : counts) chi2 += std::pow(c - draws / 3.0, 2) / (draws / 3.0);
  EXPECT_GT(retell::testing::ChiSquarePValue(chi2, 2), 0.01);
}

TEST(Intruders, ItemShufflesAndTracksIntruder) {
  Rng rng(9);
  std::map<std::size_t, int> positions;
  for (int i = 0; i < 400; ++i) {
    const IntruderItem item = MakeIntruderItem("p", {"a", "b", "c", "d"}, "z", rng);
    ASSERT_EQ(item.shown_topics.size(), 4u);
    EXPECT_EQ(item.shown_topics[item.intruder_index], "z");
    EXPECT_EQ(std::set<std::string>(item.shown_topics.begin(), item.shown_topics.end()),
              (std::set<std::string>{"a", "b", "c", "z"}));
    ++positions[item.intruder_index];
  }
  EXPECT_EQ(positions.size(), 4u);
}

TEST(ThresholdPrCurve, LimitsAndValidation) {
  const std::vector<lda::DocTopicDist> dists = {
      {"a", {0.6, 0.4}}, {"b", {0.3, 0.7}}, {"c", {0.5, 0.5}}, {"d", {0.9, 0.1}}};
  const std::vector<double> low = {0.01};
  const PrCurve all = ThresholdPrCurve(dists, {0}, {"a", "c"}, low);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_DOUBLE_EQ(all[0].recall, 1.0);
  EXPECT_DOUBLE_EQ(all[0].precision, 0.5);
  const std::vector<double> high = {0.95};
  EXPECT_TRUE(ThresholdPrCurve(dists, {0}, {"a"}, high).empty());
  EXPECT_THROW(ThresholdPrCurve(dists, {0}, {}, low), DataError);
  const std::vector<double> bad = {0.5, 0.4};
  EXPECT_THROW(ThresholdPrCurve(dists, {0}, {"a"}, bad), DataError);
  const std::vector<double> edge = {1.0};
  EXPECT_THROW(ThresholdPrCurve(dists, {0}, {"a"}, edge), DataError);
  EXPECT_THROW(ThresholdPrCurve(dists, {5}, {"a"}, low), DataError);
}

TEST(ThresholdPrCurve, RecallMonotoneAndNested) {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<lda::DocTopicDist> dists;
  std::set<std::string> positives;
  for (int i = 0; i < 60; ++i) {
    dists.push_back(Dist("p" + std::to_string(i), {u(gen), u(gen), u(gen), u(gen)}));
    if (i % 3 == 0) positives.insert("p" + std::to_string(i));
  }
  std::vector<double> cutoffs;
  for (int i = 1; i < 50; ++i) cutoffs.push_back(i / 50.0);
  const PrCurve curve = ThresholdPrCurve(dists, {1, 2}, positives, cutoffs);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_LT(curve[i - 1].cutoff, curve[i].cutoff);
    EXPECT_LE(curve[i].recall, curve[i - 1].recall);
    EXPECT_LE(curve[i].predicted, curve[i - 1].predicted);
  }
  for (const auto &p : curve) {
    EXPECT_GE(p.precision, 0.0);
    EXPECT_LE(p.precision, 1.0);
  }
}

TEST(Jsd, Examples) {
  const std::vector<double> p = {0.5, 0.5, 0.0}, q = {0.0, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(Jsd(p, p), 0.0);
  const std::vector<double> a = {1.0, 0.0}, b = {0.0, 1.0};
  EXPECT_NEAR(Jsd(a, b), std::log(2.0), 1e-15);
  // Direct summation: m = [0.25, 0.5, 0.25].
  const double oracle = 0.5 * (0.5 * std::log(0.5 / 0.25) + 0.5 * std::log(0.5 / 0.5)) +
                        0.5 * (0.5 * std::log(0.5 / 0.5) + 0.5 * std::log(0.5 / 0.25));
  EXPECT_NEAR(Jsd(p, q), oracle, 1e-15);
  EXPECT_NEAR(Jsd(p, q), Jsd(q, p), 1e-15);
  const std::vector<double> unnormalized = {0.5, 0.6};
  EXPECT_THROW(Jsd(unnormalized, a), DataError);
}

TEST(Jsd, WordDistributionsOverUnionVocabulary) {
  const std::vector<std::vector<std::string>> x = {{"sea", "sea"}, {"storm"}, {"sea"}};
  const std::vector<std::vector<std::string>> y = {{"calm", "sea"}};
  const WordDistribution px = MakeWordDistribution(x), py = MakeWordDistribution(y);
  EXPECT_DOUBLE_EQ(px.at("sea"), 0.75);
  // Union order calm, sea, storm.
  const std::vector<double> pv = {0.0, 0.75, 0.25}, qv = {0.5, 0.5, 0.0};
  EXPECT_NEAR(Jsd(px, py), Jsd(pv, qv), 1e-15);
  EXPECT_GE(Jsd(px, py), 0.0);
  EXPECT_THROW(MakeWordDistribution(std::vector<std::vector<std::string>>{{}}), DataError);
}

TEST(Predictions, FromLdaAndAssignments) {
  const std::vector<lda::DocTopicDist> dists = {{"a", {0.1, 0.6, 0.3}}};
  EXPECT_EQ(PredictionFromLda(dists).at("a"), (std::vector<std::string>{"1", "2", "0"}));
  const std::vector<tglite::TopicAssignment> assignments = {{"b", {"War", "Love"}}};
  EXPECT_EQ(PredictionFromAssignments(assignments).at("b"),
            (std::vector<std::string>{"War", "Love"}));
}

TEST(GoldLabels, LoadsRecords) {
  retell::testing::TempDir dir("gold");
  retell::testing::WriteFile(
      dir.path() / "g.jsonl",
      "{\"passage_id\":\"p1\",\"source\":\"goodreads\",\"topics\":[\"love\"],\"tags\":[\"a\",\"b\"]}\n");
  const GoldLabels gold = LoadGoldLabels(dir.path() / "g.jsonl");
  EXPECT_EQ(gold.at("p1").source, "goodreads");
  EXPECT_EQ(gold.at("p1").tags.size(), 2u);
  EXPECT_THROW(LoadGoldLabels(dir.path() / "missing.jsonl"), DataError);
}

}  // namespace
}  // namespace retell::eval
