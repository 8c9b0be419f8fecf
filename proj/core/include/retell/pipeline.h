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

#ifndef RETELL_PIPELINE_H_
#define RETELL_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "retell/lda.h"
#include "retell/preprocess.h"

// Stage drivers behind the retell-topics CLI. Each stage reads and writes
// line-delimited artifacts under the configured output directory.
namespace retell::pipeline {

namespace fs = std::filesystem;

struct PathSettings {
  fs::path books_dir;
  fs::path gazetteer;
  fs::path gold_labels;
  fs::path quotes;
  fs::path output_dir = "out";
};

struct ChunkSettings {
  std::size_t max_tokens = 250;
  double quote_threshold = 90.0;
};

// LM backend shared by the retell and TopicGPT-lite stages.
struct BackendSettings {
  std::string backend = "mock";  // "mock" or "openai"
  std::string model = "mock";
  std::string endpoint;
  std::string credential_env;
  std::optional<double> temperature;
  std::optional<double> top_p;
  bool system_prompt = true;
  std::size_t max_in_flight = 4;
  int retry_attempts = 3;
  int retry_delay_ms = 500;
  int timeout_s = 120;
};

struct RetellSettings {
  std::string verb = "summarize";
  std::string run_id = "run0";
  fs::path mock_fixture;
};

struct TgliteSettings {
  std::size_t sample_size = 1000;
  std::string mode = "single";
  uint64_t sample_seed = 0;
  fs::path mock_fixture;
};

struct EvalSettings {
  std::vector<double> cutoffs;  // empty: 0.02, 0.04, ..., 0.98
  uint64_t seed = 0;
  std::size_t bootstrap_resamples = 1000;
  std::size_t top_n = 3;
  std::size_t intruder_passages = 50;
};

struct KeywordSettings {
  std::vector<std::string> seeds;
  fs::path external;  // optional file, one term or phrase per line
  double threshold = 0.15;
  std::size_t window = 250;
  std::size_t min_df = 5;
};

struct PipelineConfig {
  PathSettings paths;
  ChunkSettings chunk;
  BackendSettings backend;
  RetellSettings retell;
  preprocess::VocabularyOptions preprocess;
  lda::LdaConfig lda = lda::LdaConfig::WithDefaults(50);
  TgliteSettings tglite;
  EvalSettings eval;
  KeywordSettings keywords;

  // Parses a JSON config file. Relative paths resolve against the file's
  // directory. Throws ConfigError on unknown keys, bad values or missing
  // referenced paths.
  static PipelineConfig Load(const fs::path &path);
  static PipelineConfig FromJson(const std::string &json_text, const fs::path &base_dir = {});

  // Checks numeric bounds and that every configured input path exists.
  void Validate() const;

  std::vector<double> EffectiveCutoffs() const;
};

struct ChunkResult {
  fs::path passages_file;
  std::size_t books = 0;
  std::size_t passages = 0;
};
ChunkResult CmdChunk(const PipelineConfig &config);

struct MatchResult {
  fs::path matches_file;
  fs::path passages_file;
  std::size_t quotes = 0;
  std::size_t matched = 0;
};
MatchResult CmdMatchQuotes(const PipelineConfig &config);

struct RetellResult {
  fs::path retellings_file;
  std::size_t total = 0;
  std::size_t reused = 0;  // already present from an earlier run
  std::size_t failed = 0;
};
// `passages_file` defaults to <output_dir>/passages.jsonl.
RetellResult CmdRetell(const PipelineConfig &config,
                       std::optional<fs::path> passages_file = std::nullopt);

fs::path RetellingsPath(const PipelineConfig &config);

enum class ModelMethod { kLda, kTglite };
enum class ModelInput { kRetellings, kPassages };

struct ModelRequest {
  ModelMethod method = ModelMethod::kLda;
  ModelInput input = ModelInput::kRetellings;
  std::optional<fs::path> passages_file;
  std::optional<fs::path> retellings_file;
  std::optional<std::string> name;  // model directory name under models/
};

struct ModelResult {
  fs::path model_dir;
  std::string fingerprint;
  std::size_t documents = 0;
  std::size_t k = 0;
  std::size_t failed = 0;
};
ModelResult CmdModel(const PipelineConfig &config, const ModelRequest &request);

fs::path DefaultModelDir(const PipelineConfig &config, const ModelRequest &request);

struct EvalRequest {
  fs::path model_dir;
  std::optional<fs::path> report_file;  // default <model_dir>/report.jsonl
  // Threshold PR curve: target LDA topics and a file of positive passage ids.
  std::set<int> pr_topics;
  std::optional<fs::path> positives_file;
  // Retelling files whose word distributions are compared with JSD.
  std::vector<fs::path> jsd_files;
};

struct EvalResult {
  fs::path report_file;
  std::optional<fs::path> pr_curve_file;
  std::optional<double> precision;
  std::optional<double> recall;
};
EvalResult CmdEval(const PipelineConfig &config, const EvalRequest &request);

struct KeywordsResult {
  fs::path keywords_file;
  fs::path passages_file;
  std::size_t expanded = 0;
  std::size_t passages = 0;
};
KeywordsResult CmdKeywords(const PipelineConfig &config,
                           std::optional<fs::path> passages_file = std::nullopt);

struct IntrudersResult {
  fs::path bundle_file;
  std::size_t items = 0;
  std::size_t skipped = 0;
};
IntrudersResult CmdIntruders(const PipelineConfig &config, const fs::path &model_dir,
                             std::optional<fs::path> out_file = std::nullopt);

}  // namespace retell::pipeline

#endif  // RETELL_PIPELINE_H_
