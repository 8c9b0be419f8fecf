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
#include <random>

#include <gtest/gtest.h>

#include "retell/error.h"
#include "retell/keywords.h"

namespace retell::corpus {
namespace {

std::vector<Passage> WindowsAsPassages(const std::vector<std::string> &texts) {
  std::vector<Passage> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({"p" + std::to_string(i), "b", {i, i + 1}, texts[i], 0});
  }
  return out;
}

// Brute-force NPMI for one (term, seed) over explicit windows.
double OracleNpmi(const std::vector<std::string> &windows, const std::string &w,
                  const std::string &s) {
  auto has = [](const std::string &window, const std::string &t) {
    return (" " + window + " ").find(" " + t + " ") != std::string::npos;
  };
  double nw = 0, ns = 0, nws = 0;
  for (const auto &win : windows) {
    nw += has(win, w);
    ns += has(win, s);
    nws += has(win, w) && has(win, s);
  }
  const double n = static_cast<double>(windows.size());
  const double pw = nw / n, ps = ns / n, pws = nws / n;
  return std::log(pws / (pw * ps)) / -std::log(pws);
}

NpmiOptions Loose(double threshold) {
  NpmiOptions options;
  options.threshold = threshold;
  options.min_candidate_df = 1;
  return options;
}

TEST(Npmi, HandCountedToyCorpus) {
  // n(w) = 3, n(s) = 3, n(w, s) = 2 over six windows.
  const std::vector<std::string> windows = {"w s", "w s q", "w", "s", "x", "x q"};
  const auto out = ExpandKeywordsNpmi(WindowsAsPassages(windows), {"s"}, Loose(0.15));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].term, "w");
  EXPECT_EQ(out[0].best_seed, "s");
  EXPECT_NEAR(out[0].npmi, OracleNpmi(windows, "w", "s"), 1e-12);
  EXPECT_NEAR(out[0].npmi, std::log(4.0 / 3.0) / std::log(3.0), 1e-12);
}

TEST(Npmi, PerfectDependenceIsOne) {
  const std::vector<std::string> windows = {"w s", "other", "w s more", "filler"};
  const auto out = ExpandKeywordsNpmi(WindowsAsPassages(windows), {"s"}, Loose(0.15));
  ASSERT_FALSE(out.empty());
  EXPECT_EQ(out[0].term, "w");
  EXPECT_NEAR(out[0].npmi, 1.0, 1e-12);
}

TEST(Npmi, IndependenceIsZero) {
  const std::vector<std::string> windows = {"w s", "w", "s", "z"};
  const auto out = ExpandKeywordsNpmi(WindowsAsPassages(windows), {"s"}, Loose(-0.5));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0].npmi, 0.0, 1e-12);
}

TEST(Npmi, ZeroJointCountIsExcluded) {
  const std::vector<std::string> windows = {"s a", "b", "b c"};
  for (const auto &t : ExpandKeywordsNpmi(WindowsAsPassages(windows), {"s"}, Loose(-1.0))) {
    EXPECT_NE(t.term, "b");
    EXPECT_NE(t.term, "c");
  }
}

TEST(Npmi, LongPassagesAreSplitIntoWindows) {
  // 500 tokens: w in the first window, s in the second.
  std::string text = "w";
  for (int i = 1; i < 500; ++i) text += i == 300 ? " s" : " f" + std::to_string(i % 7);
  const std::vector<Passage> passages = WindowsAsPassages({text, "w s"});
  NpmiOptions options = Loose(-1.0);
  options.window = 250;
  const auto split = ExpandKeywordsNpmi(passages, {"s"}, options);
  options.window = 1000;
  const auto whole = ExpandKeywordsNpmi(passages, {"s"}, options);
  auto score = [](const std::vector<NpmiTerm> &terms) {
    for (const auto &t : terms) {
      if (t.term == "w") return t.npmi;
    }
    return -2.0;
  };
  EXPECT_LT(score(split), score(whole));
}

TEST(Npmi, MinimumDocumentFrequencyApplies) {
  const std::vector<std::string> windows = {"w s", "s", "a", "b"};
  NpmiOptions options = Loose(-1.0);
  options.min_candidate_df = 2;
  EXPECT_TRUE(ExpandKeywordsNpmi(WindowsAsPassages(windows), {"s"}, options).empty());
}

TEST(Npmi, EmptySeedsRejected) {
  EXPECT_THROW(ExpandKeywordsNpmi(WindowsAsPassages({"a"}), {}, {}), DataError);
}

TEST(Npmi, BoundsAndThresholdMonotonicity) {
  std::mt19937 gen(9);
  std::uniform_int_distribution<int> pick(0, 11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> windows(30);
    for (auto &w : windows) {
      for (int t = 0; t < 6; ++t) w += "t" + std::string(1, static_cast<char>('a' + pick(gen))) + " ";
    }
    const auto passages = WindowsAsPassages(windows);
    std::size_t previous = SIZE_MAX;
    for (double threshold : {-1.0, -0.5, 0.0, 0.15, 0.3, 0.6, 1.0}) {
      const auto out = ExpandKeywordsNpmi(passages, {"ta", "tb"}, Loose(threshold));
      for (const auto &t : out) {
        EXPECT_GT(t.npmi, -1.0);
        EXPECT_LE(t.npmi, 1.0);
        EXPECT_GE(t.npmi, threshold);
      }
      EXPECT_LE(out.size(), previous);
      previous = out.size();
      for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GE(out[i - 1].npmi, out[i].npmi);
    }
  }
}

TEST(KeywordList, NormalizesAndKeepsFirstProvenance) {
  KeywordList list;
  list.Add("Jamaica", KeywordSource::kSeed);
  list.Add("  jamaica, ", KeywordSource::kExternal);
  list.Add("South  Asian", KeywordSource::kNpmiExpanded);
  list.Add("...", KeywordSource::kSeed);
  EXPECT_EQ(list.size(), 2u);
  EXPECT_EQ(list.provenance().at("jamaica"), KeywordSource::kSeed);
  EXPECT_EQ(list.provenance().at("south asian"), KeywordSource::kNpmiExpanded);
  EXPECT_EQ(std::string(KeywordSourceName(KeywordSource::kNpmiExpanded)), "npmi-expanded");
  EXPECT_EQ(ParseKeywordSource("external"), KeywordSource::kExternal);
}

TEST(KeywordFilter, Examples) {
  KeywordList list;
  list.Add("jamaica", KeywordSource::kSeed);
  list.Add("white", KeywordSource::kSeed);
  list.Add("south asian", KeywordSource::kSeed);
  EXPECT_TRUE(ContainsKeyword("They sailed to Jamaica, at dawn.", list));
  EXPECT_FALSE(ContainsKeyword("A fresh whitewash on the fence.", list));
  EXPECT_TRUE(ContainsKeyword("a South\nAsian family", list));
  EXPECT_FALSE(ContainsKeyword("south of the asian border", list));
}

TEST(KeywordFilter, SubsetAndIdempotent) {
  KeywordList list;
  list.Add("red", KeywordSource::kSeed);
  list.Add("blue sky", KeywordSource::kSeed);
  const auto passages = WindowsAsPassages(
      {"Red sky", "a blue sky.", "the blue", "reddish", "(RED)", "sky blue", ""});
  const auto once = KeywordFilter(passages, list);
  const auto twice = KeywordFilter(once, list);
  EXPECT_EQ(once, twice);
  ASSERT_EQ(once.size(), 3u);
  EXPECT_EQ(once[0].passage_id, "p0");
  EXPECT_EQ(once[1].passage_id, "p1");
  EXPECT_EQ(once[2].passage_id, "p4");
}

}  // namespace
}  // namespace retell::corpus
