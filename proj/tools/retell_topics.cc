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

// Command-line driver for the retelling topic-modeling pipeline.
//
//   retell-topics --config run.json chunk
//   retell-topics --config run.json retell
//   retell-topics --config run.json model --method lda
//   retell-topics --config run.json eval --model out/models/<name>
//
// Exit status: 0 success, 1 configuration error, 2 data error, 3 transport
// error (including runs that finished with failed records).

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "retell/error.h"
#include "retell/pipeline.h"

namespace {

namespace fs = std::filesystem;
namespace pl = retell::pipeline;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitTransport = 3;

int ExitCodeFor(retell::ErrorKind kind) {
  switch (kind) {
    case retell::ErrorKind::kConfig:
      return kExitConfig;
    case retell::ErrorKind::kData:
      return kExitData;
    case retell::ErrorKind::kTransport:
      return kExitTransport;
  }
  return kExitData;
}

template <typename T>
std::optional<T> Opt(const std::string &value) {
  if (value.empty()) return std::nullopt;
  return T(value);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Topic modeling over abstractive retellings of book passages."};
  app.require_subcommand(1);

  std::string config_path;
  bool verbose = false;
  app.add_option("-c,--config", config_path, "Pipeline config (JSON)")->required();
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  auto *chunk = app.add_subcommand("chunk", "Split books into passages of at most N tokens");
  auto *match = app.add_subcommand("match-quotes", "Locate annotated quotes in the books");

  std::string passages_file;
  auto *retell = app.add_subcommand("retell", "Retell every passage with the configured model");
  retell->add_option("--passages", passages_file, "Passages file (default <out>/passages.jsonl)");

  std::string method = "lda";
  std::string input = "retellings";
  std::string retellings_file;
  std::string model_name;
  auto *model = app.add_subcommand("model", "Fit LDA or TopicGPT-lite");
  model->add_option("--method", method, "lda or tglite")
      ->check(CLI::IsMember({"lda", "tglite"}));
  model->add_option("--input", input, "retellings or passages")
      ->check(CLI::IsMember({"retellings", "passages"}));
  model->add_option("--passages", passages_file, "Passages file");
  model->add_option("--retellings", retellings_file, "Retellings file");
  model->add_option("--name", model_name, "Model directory name under <out>/models");

  std::string model_dir;
  std::string report_file;
  std::vector<int> pr_topics;
  std::string positives_file;
  std::vector<std::string> jsd_files;
  auto *eval = app.add_subcommand("eval", "Score a model against the gold labels");
  eval->add_option("--model", model_dir, "Model directory")->required();
  eval->add_option("--report", report_file, "Report path (default <model>/report.jsonl)");
  eval->add_option("--pr-topics", pr_topics, "LDA topics for the threshold PR curve")
      ->delimiter(',');
  eval->add_option("--positives", positives_file, "Positive passage ids, one per line");
  eval->add_option("--jsd", jsd_files, "Retelling files to compare by JSD");

  auto *keywords = app.add_subcommand("keywords", "Expand seed keywords and filter passages");
  keywords->add_option("--passages", passages_file, "Passages file");

  std::string out_file;
  auto *intruders = app.add_subcommand("intruders", "Build a topic-intrusion bundle");
  intruders->add_option("--model", model_dir, "Model directory")->required();
  intruders->add_option("--out", out_file, "Bundle path (default <model>/intruders.jsonl)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_pattern("[%l] %v");

  try {
    const pl::PipelineConfig config = pl::PipelineConfig::Load(config_path);
    if (*chunk) {
      const pl::ChunkResult r = pl::CmdChunk(config);
      fmt::print("{} passages from {} books -> {}\n", r.passages, r.books, r.passages_file.string());
    } else if (*match) {
      const pl::MatchResult r = pl::CmdMatchQuotes(config);
      fmt::print("{}/{} quotes matched -> {}\n", r.matched, r.quotes, r.matches_file.string());
    } else if (*retell) {
      const pl::RetellResult r = pl::CmdRetell(config, Opt<fs::path>(passages_file));
      fmt::print("{} retellings ({} reused, {} failed) -> {}\n", r.total, r.reused, r.failed,
                 r.retellings_file.string());
      if (r.failed > 0) return kExitTransport;
    } else if (*model) {
      pl::ModelRequest request;
      request.method = method == "lda" ? pl::ModelMethod::kLda : pl::ModelMethod::kTglite;
      request.input = input == "passages" ? pl::ModelInput::kPassages : pl::ModelInput::kRetellings;
      request.passages_file = Opt<fs::path>(passages_file);
      request.retellings_file = Opt<fs::path>(retellings_file);
      request.name = Opt<std::string>(model_name);
      const pl::ModelResult r = pl::CmdModel(config, request);
      fmt::print("{} documents, k = {} -> {}\n", r.documents, r.k, r.model_dir.string());
      if (r.failed > 0) return kExitTransport;
    } else if (*eval) {
      pl::EvalRequest request;
      request.model_dir = model_dir;
      request.report_file = Opt<fs::path>(report_file);
      request.pr_topics.insert(pr_topics.begin(), pr_topics.end());
      request.positives_file = Opt<fs::path>(positives_file);
      for (const std::string &f : jsd_files) request.jsd_files.emplace_back(f);
      const pl::EvalResult r = pl::CmdEval(config, request);
      auto show = [](const std::optional<double> &v) {
        return v ? fmt::format("{:.4f}", *v) : std::string("n/a");
      };
      fmt::print("precision {} recall {} -> {}\n", show(r.precision), show(r.recall),
                 r.report_file.string());
    } else if (*keywords) {
      const pl::KeywordsResult r = pl::CmdKeywords(config, Opt<fs::path>(passages_file));
      fmt::print("{} expanded keywords, {} passages kept -> {}\n", r.expanded, r.passages,
                 r.passages_file.string());
    } else if (*intruders) {
      const pl::IntrudersResult r = pl::CmdIntruders(config, model_dir, Opt<fs::path>(out_file));
      fmt::print("{} items ({} passages skipped) -> {}\n", r.items, r.skipped,
                 r.bundle_file.string());
    }
  } catch (const retell::Error &e) {
    spdlog::error("{}", e.what());
    return ExitCodeFor(e.kind());
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
    return kExitData;
  }
  return kExitOk;
}
