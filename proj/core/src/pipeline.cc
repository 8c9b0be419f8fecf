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

#include "retell/pipeline.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "retell/chat.h"
#include "retell/corpus.h"
#include "retell/error.h"
#include "retell/eval.h"
#include "retell/fingerprint.h"
#include "retell/io.h"
#include "retell/keywords.h"
#include "retell/lda.h"
#include "retell/preprocess.h"
#include "retell/retelling.h"
#include "retell/rng.h"
#include "retell/text.h"
#include "retell/tglite.h"

namespace retell::pipeline {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

void RejectUnknownKeys(const json &section, const std::string &name,
                       std::initializer_list<const char *> known) {
  if (!section.is_object()) throw ConfigError(fmt::format("config section '{}' must be an object", name));
  for (const auto &[key, value] : section.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char *k) { return key == k; })) {
      throw ConfigError(fmt::format("unknown config key '{}.{}'", name, key));
    }
  }
}

template <typename T>
void Read(const json &section, const char *key, T &out) {
  if (section.contains(key)) out = section.at(key).get<T>();
}

void ReadPath(const json &section, const char *key, const fs::path &base, fs::path &out) {
  if (!section.contains(key)) return;
  fs::path value = section.at(key).get<std::string>();
  out = (value.is_relative() && !base.empty()) ? base / value : value;
}

void RequirePath(const fs::path &path, const char *what) {
  if (path.empty()) return;
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw ConfigError(fmt::format("{} '{}' does not exist", what, path.string()));
  }
}

}  // namespace

PipelineConfig PipelineConfig::FromJson(const std::string &json_text, const fs::path &base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception &e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  PipelineConfig config;
  try {
    RejectUnknownKeys(root, "<root>",
                      {"paths", "chunk", "backend", "retell", "preprocess", "lda", "topicgpt",
                       "eval", "keywords"});
    if (root.contains("paths")) {
      const json &s = root["paths"];
      RejectUnknownKeys(s, "paths", {"books_dir", "gazetteer", "gold_labels", "quotes", "output_dir"});
      ReadPath(s, "books_dir", base_dir, config.paths.books_dir);
      ReadPath(s, "gazetteer", base_dir, config.paths.gazetteer);
      ReadPath(s, "gold_labels", base_dir, config.paths.gold_labels);
      ReadPath(s, "quotes", base_dir, config.paths.quotes);
      ReadPath(s, "output_dir", base_dir, config.paths.output_dir);
    } else if (!base_dir.empty()) {
      config.paths.output_dir = base_dir / config.paths.output_dir;
    }
    if (root.contains("chunk")) {
      const json &s = root["chunk"];
      RejectUnknownKeys(s, "chunk", {"max_tokens", "quote_threshold"});
      Read(s, "max_tokens", config.chunk.max_tokens);
      Read(s, "quote_threshold", config.chunk.quote_threshold);
    }
    if (root.contains("backend")) {
      const json &s = root["backend"];
      RejectUnknownKeys(s, "backend",
                        {"backend", "model", "endpoint", "credential_env", "temperature", "top_p",
                         "system_prompt", "max_in_flight", "retry_attempts", "retry_delay_ms",
                         "timeout_s"});
      BackendSettings &b = config.backend;
      Read(s, "backend", b.backend);
      Read(s, "model", b.model);
      Read(s, "endpoint", b.endpoint);
      Read(s, "credential_env", b.credential_env);
      if (s.contains("temperature")) b.temperature = s["temperature"].get<double>();
      if (s.contains("top_p")) b.top_p = s["top_p"].get<double>();
      Read(s, "system_prompt", b.system_prompt);
      Read(s, "max_in_flight", b.max_in_flight);
      Read(s, "retry_attempts", b.retry_attempts);
      Read(s, "retry_delay_ms", b.retry_delay_ms);
      Read(s, "timeout_s", b.timeout_s);
    }
    if (root.contains("retell")) {
      const json &s = root["retell"];
      RejectUnknownKeys(s, "retell", {"verb", "run_id", "mock_fixture"});
      Read(s, "verb", config.retell.verb);
      Read(s, "run_id", config.retell.run_id);
      ReadPath(s, "mock_fixture", base_dir, config.retell.mock_fixture);
    }
    if (root.contains("preprocess")) {
      const json &s = root["preprocess"];
      RejectUnknownKeys(s, "preprocess", {"min_chars", "max_df_frac", "min_df_docs"});
      Read(s, "min_chars", config.preprocess.min_chars);
      Read(s, "max_df_frac", config.preprocess.max_df_frac);
      Read(s, "min_df_docs", config.preprocess.min_df_docs);
    }
    if (root.contains("lda")) {
      const json &s = root["lda"];
      RejectUnknownKeys(s, "lda", {"k", "alpha", "beta", "iterations", "burn_in", "seed"});
      int k = config.lda.k;
      Read(s, "k", k);
      config.lda = lda::LdaConfig::WithDefaults(k);
      Read(s, "alpha", config.lda.alpha);
      Read(s, "beta", config.lda.beta);
      Read(s, "iterations", config.lda.iterations);
      Read(s, "burn_in", config.lda.burn_in);
      Read(s, "seed", config.lda.seed);
    }
    if (root.contains("topicgpt")) {
      const json &s = root["topicgpt"];
      RejectUnknownKeys(s, "topicgpt", {"sample_size", "mode", "sample_seed", "mock_fixture"});
      Read(s, "sample_size", config.tglite.sample_size);
      Read(s, "mode", config.tglite.mode);
      Read(s, "sample_seed", config.tglite.sample_seed);
      ReadPath(s, "mock_fixture", base_dir, config.tglite.mock_fixture);
    }
    if (root.contains("eval")) {
      const json &s = root["eval"];
      RejectUnknownKeys(s, "eval",
                        {"cutoffs", "seed", "bootstrap_resamples", "top_n", "intruder_passages"});
      Read(s, "cutoffs", config.eval.cutoffs);
      Read(s, "seed", config.eval.seed);
      Read(s, "bootstrap_resamples", config.eval.bootstrap_resamples);
      Read(s, "top_n", config.eval.top_n);
      Read(s, "intruder_passages", config.eval.intruder_passages);
    }
    if (root.contains("keywords")) {
      const json &s = root["keywords"];
      RejectUnknownKeys(s, "keywords", {"seeds", "external", "threshold", "window", "min_df"});
      Read(s, "seeds", config.keywords.seeds);
      ReadPath(s, "external", base_dir, config.keywords.external);
      Read(s, "threshold", config.keywords.threshold);
      Read(s, "window", config.keywords.window);
      Read(s, "min_df", config.keywords.min_df);
    }
  } catch (const json::exception &e) {
    throw ConfigError(fmt::format("bad config value: {}", e.what()));
  }
  config.Validate();
  return config;
}

PipelineConfig PipelineConfig::Load(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str(), path.parent_path());
}

void PipelineConfig::Validate() const {
  RequirePath(paths.books_dir, "books_dir");
  RequirePath(paths.gazetteer, "gazetteer");
  RequirePath(paths.gold_labels, "gold_labels");
  RequirePath(paths.quotes, "quotes");
  RequirePath(retell.mock_fixture, "retell.mock_fixture");
  RequirePath(tglite.mock_fixture, "topicgpt.mock_fixture");
  RequirePath(keywords.external, "keywords.external");
  if (chunk.max_tokens == 0) throw ConfigError("chunk.max_tokens must be positive");
  if (chunk.quote_threshold < 0.0 || chunk.quote_threshold > 100.0) {
    throw ConfigError("chunk.quote_threshold must lie in [0, 100]");
  }
  if (backend.backend != "mock" && backend.backend != "openai") {
    throw ConfigError(fmt::format("backend must be 'mock' or 'openai' (got '{}')", backend.backend));
  }
  if (backend.max_in_flight == 0) throw ConfigError("backend.max_in_flight must be positive");
  if (backend.retry_attempts < 1) throw ConfigError("backend.retry_attempts must be >= 1");
  lm::ParseVerb(retell.verb);
  if (retell.run_id.empty()) throw ConfigError("retell.run_id must not be empty");
  if (preprocess.max_df_frac <= 0.0 || preprocess.max_df_frac > 1.0) {
    throw ConfigError("preprocess.max_df_frac must lie in (0, 1]");
  }
  lda.Validate();
  tglite::ParseMode(tglite.mode);
  if (tglite.sample_size == 0) throw ConfigError("topicgpt.sample_size must be positive");
  for (std::size_t i = 0; i < eval.cutoffs.size(); ++i) {
    if (!(eval.cutoffs[i] > 0.0 && eval.cutoffs[i] < 1.0) ||
        (i > 0 && !(eval.cutoffs[i] > eval.cutoffs[i - 1]))) {
      throw ConfigError("eval.cutoffs must be strictly increasing values in (0, 1)");
    }
  }
  if (keywords.threshold < -1.0 || keywords.threshold > 1.0) {
    throw ConfigError("keywords.threshold must lie in [-1, 1]");
  }
  if (keywords.window == 0) throw ConfigError("keywords.window must be positive");
}

std::vector<double> PipelineConfig::EffectiveCutoffs() const {
  if (!eval.cutoffs.empty()) return eval.cutoffs;
  std::vector<double> cutoffs;
  for (int i = 1; i < 50; ++i) cutoffs.push_back(i / 50.0);
  return cutoffs;
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

std::string Hash(const json &payload) { return Fingerprint(payload.dump()); }

// Fingerprint recorded in an artifact's header, or its content hash.
std::string ArtifactFingerprint(const fs::path &path) {
  if (auto header = io::ReadHeader(path)) return header->fingerprint;
  return FileFingerprint(path);
}

std::string OptionalFileFingerprint(const fs::path &path) {
  return path.empty() ? std::string() : FileFingerprint(path);
}

std::string SafeName(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

fs::path DefaultPassagesFile(const PipelineConfig &config) {
  return config.paths.output_dir / "passages.jsonl";
}

void RequireFile(const fs::path &path, const char *what) {
  std::error_code ec;
  if (path.empty() || !fs::is_regular_file(path, ec)) {
    throw DataError(fmt::format("{} '{}' not found", what, path.string()));
  }
}

std::unique_ptr<lm::ChatClient> MakeClient(const PipelineConfig &config,
                                           const fs::path &mock_fixture) {
  if (config.backend.backend == "mock") {
    if (mock_fixture.empty()) throw ConfigError("mock backend needs a mock_fixture file");
    return lm::MockChatClient::FromFile(mock_fixture);
  }
  lm::OpenAiConfig openai;
  openai.endpoint = config.backend.endpoint;
  openai.credential_env = config.backend.credential_env;
  openai.temperature = config.backend.temperature;
  openai.top_p = config.backend.top_p;
  openai.timeout = std::chrono::seconds(config.backend.timeout_s);
  return std::make_unique<lm::OpenAiChatClient>(openai);
}

lm::RetryPolicy MakeRetry(const BackendSettings &backend) {
  lm::RetryPolicy retry;
  retry.max_attempts = backend.retry_attempts;
  retry.initial_delay = std::chrono::milliseconds(backend.retry_delay_ms);
  return retry;
}

json BackendIdentity(const PipelineConfig &config, const fs::path &mock_fixture) {
  json identity{{"backend", config.backend.backend},
                {"model", config.backend.model},
                {"system_prompt", config.backend.system_prompt}};
  if (config.backend.temperature) identity["temperature"] = *config.backend.temperature;
  if (config.backend.top_p) identity["top_p"] = *config.backend.top_p;
  if (config.backend.backend == "mock") identity["fixture"] = OptionalFileFingerprint(mock_fixture);
  return identity;
}

void WriteJsonFile(const fs::path &path, const json &value) {
  io::AtomicWrite(path, value.dump(2) + "\n");
}

json ReadJsonFile(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot read {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw DataError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// chunk

ChunkResult CmdChunk(const PipelineConfig &config) {
  if (config.paths.books_dir.empty()) throw ConfigError("paths.books_dir is not configured");
  const std::vector<corpus::Book> books = corpus::LoadBooks(config.paths.books_dir);

  json sources = json::array();
  std::vector<corpus::Passage> passages;
  for (const corpus::Book &book : books) {
    sources.push_back({book.book_id,
                       FileFingerprint(config.paths.books_dir / (book.book_id + ".txt"))});
    std::vector<corpus::Passage> chunked = corpus::ChunkPassages(book, config.chunk.max_tokens);
    if (chunked.empty()) spdlog::warn("book {} has no paragraphs", book.book_id);
    passages.insert(passages.end(), std::make_move_iterator(chunked.begin()),
                    std::make_move_iterator(chunked.end()));
  }

  io::ArtifactHeader header;
  header.artifact = "passages";
  header.fingerprint = Hash({{"stage", "chunk"},
                             {"max_tokens", config.chunk.max_tokens},
                             {"books", sources}});
  ChunkResult result{DefaultPassagesFile(config), books.size(), passages.size()};
  io::WritePassages(result.passages_file, passages, header);
  spdlog::info("chunked {} books into {} passages", books.size(), passages.size());
  return result;
}

// ---------------------------------------------------------------------------
// match-quotes

MatchResult CmdMatchQuotes(const PipelineConfig &config) {
  if (config.paths.books_dir.empty()) throw ConfigError("paths.books_dir is not configured");
  if (config.paths.quotes.empty()) throw ConfigError("paths.quotes is not configured");
  const std::vector<corpus::Book> books = corpus::LoadBooks(config.paths.books_dir);
  std::map<std::string, const corpus::Book *> by_id;
  std::map<std::string, std::vector<corpus::Passage>> chunks;
  json sources = json::array();
  for (const corpus::Book &book : books) {
    by_id[book.book_id] = &book;
    chunks[book.book_id] = corpus::ChunkPassages(book, config.chunk.max_tokens);
    sources.push_back({book.book_id,
                       FileFingerprint(config.paths.books_dir / (book.book_id + ".txt"))});
  }
  const std::vector<io::QuoteRecord> quotes = io::ReadQuotes(config.paths.quotes);

  io::ArtifactHeader header;
  header.fingerprint = Hash({{"stage", "match-quotes"},
                             {"books", sources},
                             {"quotes", FileFingerprint(config.paths.quotes)},
                             {"max_tokens", config.chunk.max_tokens},
                             {"threshold", config.chunk.quote_threshold}});

  std::ostringstream matches;
  header.artifact = "quote-matches";
  matches << io::HeaderLine(header) << '\n';
  std::vector<corpus::Passage> contexts;
  std::set<std::string> context_ids;
  MatchResult result;
  result.quotes = quotes.size();
  for (const io::QuoteRecord &quote : quotes) {
    json record{{"book_id", quote.book_id}, {"quote", quote.quote}, {"labels", quote.labels}};
    auto book = by_id.find(quote.book_id);
    std::optional<corpus::QuoteMatch> match;
    if (book == by_id.end()) {
      spdlog::warn("quote refers to unknown book '{}'", quote.book_id);
    } else {
      match = corpus::MatchQuote(quote.quote, *book->second, chunks[quote.book_id],
                                 config.chunk.quote_threshold);
    }
    if (match) {
      ++result.matched;
      corpus::Passage context = corpus::PassageContextForQuote(*match, *book->second,
                                                               config.chunk.max_tokens);
      record["matched"] = true;
      record["passage_id"] = context.passage_id;
      record["chunk_passage_id"] = match->passage_id;
      record["similarity"] = match->similarity;
      record["matched_span"] = {match->span_begin, match->span_end};
      record["paragraph_index"] = match->paragraph_index;
      if (context_ids.insert(context.passage_id).second) contexts.push_back(std::move(context));
    } else {
      record["matched"] = false;
    }
    matches << record.dump() << '\n';
  }
  result.matches_file = config.paths.output_dir / "quote_matches.jsonl";
  result.passages_file = config.paths.output_dir / "quote_passages.jsonl";
  io::AtomicWrite(result.matches_file, matches.str());
  header.artifact = "passages";
  io::WritePassages(result.passages_file, contexts, header);
  spdlog::info("matched {} of {} quotes", result.matched, result.quotes);
  return result;
}

// ---------------------------------------------------------------------------
// retell

fs::path RetellingsPath(const PipelineConfig &config) {
  return config.paths.output_dir / "retellings" /
         fmt::format("{}__{}__{}.jsonl", config.retell.verb, SafeName(config.backend.model),
                     SafeName(config.retell.run_id));
}

RetellResult CmdRetell(const PipelineConfig &config, std::optional<fs::path> passages_file) {
  const fs::path input = passages_file.value_or(DefaultPassagesFile(config));
  RequireFile(input, "passages file");
  io::ArtifactHeader passages_header;
  const std::vector<corpus::Passage> passages = io::ReadPassages(input, &passages_header);
  const std::string input_fp = passages_header.fingerprint.empty() ? FileFingerprint(input)
                                                                   : passages_header.fingerprint;
  const lm::RetellVerb verb = lm::ParseVerb(config.retell.verb);

  io::ArtifactHeader header;
  header.artifact = "retellings";
  header.inputs = {{"passages", input_fp}};
  header.fingerprint = Hash({{"stage", "retell"},
                             {"passages", input_fp},
                             {"verb", config.retell.verb},
                             {"run_id", config.retell.run_id},
                             {"backend", BackendIdentity(config, config.retell.mock_fixture)}});

  RetellResult result;
  result.retellings_file = RetellingsPath(config);
  result.total = passages.size();

  // Resume: keep successful records from an earlier run with equal settings.
  std::map<std::string, lm::Retelling> done;
  const bool resuming = fs::exists(result.retellings_file);
  if (resuming) {
    io::ArtifactHeader existing;
    for (lm::Retelling &r : io::ReadRetellings(result.retellings_file, &existing)) {
      if (r.status == lm::RetellStatus::kOk) done[r.passage_id] = std::move(r);
    }
    if (existing.fingerprint != header.fingerprint) {
      throw DataError(fmt::format(
          "{} was produced with different settings; remove it or choose another run_id",
          result.retellings_file.string()));
    }
  }
  std::vector<corpus::Passage> pending;
  for (const corpus::Passage &p : passages) {
    if (!done.contains(p.passage_id)) pending.push_back(p);
  }
  result.reused = passages.size() - pending.size();

  std::vector<lm::Retelling> fresh;
  if (!pending.empty()) {
    std::unique_ptr<lm::ChatClient> client = MakeClient(config, config.retell.mock_fixture);
    fs::create_directories(result.retellings_file.parent_path());
    std::ofstream progress(result.retellings_file, std::ios::app);
    if (!progress) throw DataError(fmt::format("cannot write {}", result.retellings_file.string()));
    if (!resuming) progress << io::HeaderLine(header) << '\n' << std::flush;

    lm::RetellOptions options;
    options.model_id = config.backend.model;
    options.run_id = config.retell.run_id;
    options.max_in_flight = config.backend.max_in_flight;
    options.retry = MakeRetry(config.backend);
    options.omit_system_prompt = !config.backend.system_prompt;
    options.on_complete = [&](std::size_t, const lm::Retelling &r) {
      progress << io::RetellingLine(r) << '\n' << std::flush;
    };
    fresh = lm::RetellBatch(pending, verb, *client, options);
  }

  // Canonical rewrite in input order.
  std::map<std::string, const lm::Retelling *> fresh_by_id;
  for (const lm::Retelling &r : fresh) fresh_by_id[r.passage_id] = &r;
  std::vector<lm::Retelling> ordered;
  ordered.reserve(passages.size());
  for (const corpus::Passage &p : passages) {
    if (auto it = done.find(p.passage_id); it != done.end()) {
      ordered.push_back(it->second);
    } else {
      const lm::Retelling &r = *fresh_by_id.at(p.passage_id);
      if (r.status == lm::RetellStatus::kFailed) ++result.failed;
      ordered.push_back(r);
    }
  }
  io::WriteRetellings(result.retellings_file, ordered, header);
  spdlog::info("retold {} passages ({} reused, {} failed)", passages.size(), result.reused,
               result.failed);
  return result;
}

// ---------------------------------------------------------------------------
// model

namespace {

struct ModelInputs {
  std::vector<tglite::Document> docs;
  std::vector<std::string> book_ids;
  json fingerprint;
};

ModelInputs LoadModelInputs(const PipelineConfig &config, const ModelRequest &request) {
  const fs::path passages_path = request.passages_file.value_or(DefaultPassagesFile(config));
  RequireFile(passages_path, "passages file");
  const std::vector<corpus::Passage> passages = io::ReadPassages(passages_path);
  ModelInputs inputs;
  inputs.fingerprint["passages"] = ArtifactFingerprint(passages_path);
  if (request.input == ModelInput::kPassages) {
    for (const corpus::Passage &p : passages) {
      inputs.docs.push_back({p.passage_id, p.text});
      inputs.book_ids.push_back(p.book_id);
    }
    return inputs;
  }
  std::map<std::string, std::string> book_of;
  for (const corpus::Passage &p : passages) book_of[p.passage_id] = p.book_id;
  const fs::path retellings_path = request.retellings_file.value_or(RetellingsPath(config));
  RequireFile(retellings_path, "retellings file");
  inputs.fingerprint["retellings"] = ArtifactFingerprint(retellings_path);
  std::size_t skipped = 0;
  for (const lm::Retelling &r : io::ReadRetellings(retellings_path)) {
    if (r.status != lm::RetellStatus::kOk) {
      ++skipped;
      continue;
    }
    auto it = book_of.find(r.passage_id);
    if (it == book_of.end()) {
      spdlog::warn("retelling {} has no passage in {}", r.passage_id, passages_path.string());
    }
    inputs.docs.push_back({r.passage_id, r.text});
    inputs.book_ids.push_back(it == book_of.end() ? std::string() : it->second);
  }
  if (skipped > 0) spdlog::warn("skipped {} failed retellings", skipped);
  return inputs;
}

ModelResult RunLda(const PipelineConfig &config, const ModelRequest &request,
                   const ModelInputs &inputs, const fs::path &dir) {
  std::optional<preprocess::Gazetteer> gazetteer;
  if (!config.paths.gazetteer.empty()) {
    gazetteer = preprocess::Gazetteer::FromFile(config.paths.gazetteer);
  }
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(inputs.docs.size());
  for (std::size_t i = 0; i < inputs.docs.size(); ++i) {
    std::vector<std::string> doc = preprocess::Tokenize(inputs.docs[i].text);
    if (gazetteer) doc = preprocess::RemoveNames(doc, *gazetteer, inputs.book_ids[i]);
    tokens.push_back(std::move(doc));
  }
  const preprocess::Vocabulary vocab = preprocess::BuildVocabulary(tokens, config.preprocess);
  std::vector<preprocess::BowDoc> bows;
  bows.reserve(tokens.size());
  std::size_t empty = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    bows.push_back(preprocess::ToBow(tokens[i], vocab, inputs.docs[i].doc_id));
    if (bows.back().empty()) ++empty;
  }
  if (empty > 0) spdlog::warn("{} documents are empty after filtering", empty);

  const lda::LdaModel model = lda::Train(bows, vocab.size(), config.lda);
  const std::vector<lda::DocTopicDist> dists = lda::DocTopicDistributions(model);

  json payload{{"stage", "model"},
               {"method", "lda"},
               {"input", request.input == ModelInput::kPassages ? "passages" : "retellings"},
               {"inputs", inputs.fingerprint},
               {"gazetteer", OptionalFileFingerprint(config.paths.gazetteer)},
               {"preprocess",
                {{"min_chars", config.preprocess.min_chars},
                 {"max_df_frac", config.preprocess.max_df_frac},
                 {"min_df_docs", config.preprocess.min_df_docs}}},
               {"lda",
                {{"k", config.lda.k},
                 {"alpha", config.lda.alpha},
                 {"beta", config.lda.beta},
                 {"iterations", config.lda.iterations},
                 {"burn_in", config.lda.burn_in},
                 {"seed", config.lda.seed}}}};
  io::ArtifactHeader header;
  header.fingerprint = Hash(payload);
  header.inputs = inputs.fingerprint.get<std::map<std::string, std::string>>();

  header.artifact = "vocabulary";
  io::WriteVocabulary(dir / "vocab.jsonl", vocab, header);
  header.artifact = "bow";
  io::WriteBowDocs(dir / "bow.jsonl", bows, header);
  header.artifact = "lda-model";
  io::SaveLdaModel(dir / "model.jsonl", model, header);
  header.artifact = "doc-topics";
  io::WriteDocTopics(dir / "doc_topics.jsonl", dists, header);

  std::ostringstream topics;
  header.artifact = "topics";
  topics << io::HeaderLine(header) << '\n';
  for (int t = 0; t < model.num_topics(); ++t) {
    topics << json{{"topic", t}, {"words", lda::TopicTopWords(model, vocab, t, 5)}}.dump() << '\n';
  }
  io::AtomicWrite(dir / "topics.jsonl", topics.str());

  WriteJsonFile(dir / "manifest.json", {{"method", "lda"},
                                        {"fingerprint", header.fingerprint},
                                        {"config", payload},
                                        {"documents", bows.size()},
                                        {"vocab_size", vocab.size()},
                                        {"k", config.lda.k}});
  return {dir, header.fingerprint, bows.size(), static_cast<std::size_t>(config.lda.k), 0};
}

ModelResult RunTglite(const PipelineConfig &config, const ModelRequest &request,
                      const ModelInputs &inputs, const fs::path &dir) {
  tglite::TgliteOptions options;
  options.model_id = config.backend.model;
  options.mode = tglite::ParseMode(config.tglite.mode);
  options.retry = MakeRetry(config.backend);
  options.max_in_flight = config.backend.max_in_flight;
  options.omit_system_prompt = !config.backend.system_prompt;
  std::unique_ptr<lm::ChatClient> client = MakeClient(config, config.tglite.mock_fixture);

  // Seeded sample of N documents for pool generation.
  std::vector<std::size_t> order(inputs.docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(config.tglite.sample_seed);
  rng.Shuffle(order);
  order.resize(std::min(order.size(), config.tglite.sample_size));
  std::vector<tglite::Document> sample;
  for (std::size_t i : order) sample.push_back(inputs.docs[i]);

  const tglite::TopicPool pool = tglite::GenerateTopics(sample, *client, options);
  if (pool.empty()) throw DataError("topic generation produced an empty pool");
  tglite::AssignmentDiagnostics diagnostics;
  const std::vector<tglite::TopicAssignment> assignments =
      tglite::AssignTopicsBatch(inputs.docs, pool, *client, options, &diagnostics);
  const std::size_t k = tglite::AssignedTopicCount(assignments);

  json payload{{"stage", "model"},
               {"method", "tglite"},
               {"input", request.input == ModelInput::kPassages ? "passages" : "retellings"},
               {"inputs", inputs.fingerprint},
               {"topicgpt",
                {{"sample_size", config.tglite.sample_size},
                 {"mode", config.tglite.mode},
                 {"sample_seed", config.tglite.sample_seed}}},
               {"backend", BackendIdentity(config, config.tglite.mock_fixture)}};
  io::ArtifactHeader header;
  header.fingerprint = Hash(payload);
  header.inputs = inputs.fingerprint.get<std::map<std::string, std::string>>();
  header.artifact = "topic-pool";
  io::WriteTopicPool(dir / "pool.jsonl", pool, header);
  header.artifact = "assignments";
  io::WriteAssignments(dir / "assignments.jsonl", assignments, header);

  std::size_t assigned = 0;
  for (const auto &a : assignments) assigned += a.ranked_labels.size();
  const double mean_labels =
      assignments.empty() ? 0.0 : static_cast<double>(assigned) / static_cast<double>(assignments.size());
  WriteJsonFile(dir / "diagnostics.json", {{"fingerprint", header.fingerprint},
                                           {"hallucinated_count", diagnostics.hallucinated_count},
                                           {"empty_count", diagnostics.empty_count},
                                           {"failed_count", diagnostics.failed_count},
                                           {"pool_size", pool.size()},
                                           {"k", k},
                                           {"mean_labels_per_doc", mean_labels}});
  WriteJsonFile(dir / "manifest.json", {{"method", "tglite"},
                                        {"fingerprint", header.fingerprint},
                                        {"config", payload},
                                        {"documents", assignments.size()},
                                        {"pool_size", pool.size()},
                                        {"k", k}});
  return {dir, header.fingerprint, assignments.size(), k, diagnostics.failed_count};
}

}  // namespace

fs::path DefaultModelDir(const PipelineConfig &config, const ModelRequest &request) {
  std::string name;
  if (request.name) {
    name = SafeName(*request.name);
  } else if (request.method == ModelMethod::kTglite) {
    name = fmt::format("tglite-{}-{}-n{}", config.tglite.mode, SafeName(config.backend.model),
                       config.tglite.sample_size);
  } else if (request.input == ModelInput::kPassages) {
    name = fmt::format("lda-passages-k{}-s{}", config.lda.k, config.lda.seed);
  } else {
    name = fmt::format("lda-{}-{}-{}-k{}-s{}", config.retell.verb, SafeName(config.backend.model),
                       SafeName(config.retell.run_id), config.lda.k, config.lda.seed);
  }
  return config.paths.output_dir / "models" / name;
}

ModelResult CmdModel(const PipelineConfig &config, const ModelRequest &request) {
  const ModelInputs inputs = LoadModelInputs(config, request);
  if (inputs.docs.empty()) throw DataError("no documents to model");
  const fs::path dir = DefaultModelDir(config, request);
  fs::create_directories(dir);
  ModelResult result = request.method == ModelMethod::kLda ? RunLda(config, request, inputs, dir)
                                                           : RunTglite(config, request, inputs, dir);
  spdlog::info("model written to {} ({} documents, k = {})", dir.string(), result.documents,
               result.k);
  return result;
}

// ---------------------------------------------------------------------------
// eval

namespace {

// Artifacts of one model directory, checked against its manifest.
struct LoadedModel {
  std::string method;
  std::string fingerprint;
  eval::Prediction prediction;
  std::map<std::string, std::string> display;  // topic id -> human-readable form
  std::vector<lda::DocTopicDist> dists;        // LDA only
  tglite::TopicPool pool;                      // TopicGPT-lite only
  std::vector<tglite::TopicAssignment> assignments;
  std::size_t k = 0;
};

void CheckFingerprint(const io::ArtifactHeader &header, const std::string &expected,
                      const fs::path &path) {
  if (header.fingerprint != expected) {
    throw DataError(fmt::format(
        "{} has fingerprint '{}' but the model manifest expects '{}'; refusing to mix artifacts",
        path.string(), header.fingerprint, expected));
  }
}

LoadedModel LoadModel(const fs::path &dir) {
  const json manifest = ReadJsonFile(dir / "manifest.json");
  LoadedModel model;
  model.method = manifest.at("method").get<std::string>();
  model.fingerprint = manifest.at("fingerprint").get<std::string>();
  io::ArtifactHeader header;
  if (model.method == "lda") {
    model.dists = io::ReadDocTopics(dir / "doc_topics.jsonl", &header);
    CheckFingerprint(header, model.fingerprint, dir / "doc_topics.jsonl");
    model.prediction = eval::PredictionFromLda(model.dists);
    model.k = model.dists.empty() ? 0 : model.dists.front().probs.size();
    std::ifstream topics(dir / "topics.jsonl");
    std::string line;
    bool first = true;
    while (std::getline(topics, line)) {
      const json record = json::parse(line);
      if (first) {
        first = false;
        CheckFingerprint({record.value("artifact", ""), record.value("fingerprint", ""), {}},
                         model.fingerprint, dir / "topics.jsonl");
        continue;
      }
      std::string words;
      for (const auto &w : record.at("words")) {
        if (!words.empty()) words += ", ";
        words += w.get<std::string>();
      }
      model.display[std::to_string(record.at("topic").get<int>())] = words;
    }
  } else if (model.method == "tglite") {
    model.pool = io::ReadTopicPool(dir / "pool.jsonl", &header);
    CheckFingerprint(header, model.fingerprint, dir / "pool.jsonl");
    model.assignments = io::ReadAssignments(dir / "assignments.jsonl", &header);
    CheckFingerprint(header, model.fingerprint, dir / "assignments.jsonl");
    model.prediction = eval::PredictionFromAssignments(model.assignments);
    model.k = tglite::AssignedTopicCount(model.assignments);
    for (const auto &topic : model.pool.topics()) model.display[topic.label] = topic.label;
  } else {
    throw DataError(fmt::format("unknown model method '{}' in {}", model.method, dir.string()));
  }
  return model;
}

json TopicList(const LoadedModel &model, const std::vector<std::pair<std::string, double>> &scored,
               std::size_t n) {
  json list = json::array();
  for (std::size_t i = 0; i < std::min(n, scored.size()); ++i) {
    const auto &[id, score] = scored[i];
    auto it = model.display.find(id);
    list.push_back({{"id", id}, {"display", it == model.display.end() ? id : it->second},
                    {"score", score}});
  }
  return list;
}

// Prominence over a passage subset: mean probability (LDA) or MRR.
std::vector<std::pair<std::string, double>> Prominence(const LoadedModel &model,
                                                       const std::set<std::string> &subset) {
  std::vector<std::pair<std::string, double>> scored;
  if (model.method == "lda") {
    std::vector<lda::DocTopicDist> chosen;
    for (const auto &d : model.dists) {
      if (subset.contains(d.doc_id)) chosen.push_back(d);
    }
    if (chosen.empty()) return scored;
    for (const lda::TopicScore &s : lda::RankTopicsByMeanProbability(chosen)) {
      scored.emplace_back(std::to_string(s.topic), s.mean_prob);
    }
  } else {
    std::vector<tglite::TopicAssignment> chosen;
    for (const auto &a : model.assignments) {
      if (subset.contains(a.doc_id)) chosen.push_back(a);
    }
    if (chosen.empty()) return scored;
    for (const tglite::LabelScore &s : tglite::MrrProminence(chosen, model.pool)) {
      scored.emplace_back(s.label, s.mrr);
    }
  }
  return scored;
}

std::set<std::string> ReadIdList(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot read {}", path.string()));
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view id = text::Trim(line);
    if (!id.empty()) ids.emplace(id);
  }
  return ids;
}

}  // namespace

EvalResult CmdEval(const PipelineConfig &config, const EvalRequest &request) {
  if (config.paths.gold_labels.empty()) throw DataError("paths.gold_labels is not configured");
  RequireFile(config.paths.gold_labels, "gold labels file");
  const eval::GoldLabels gold = eval::LoadGoldLabels(config.paths.gold_labels);
  const LoadedModel model = LoadModel(request.model_dir);

  const std::vector<double> cutoffs = config.EffectiveCutoffs();
  const std::string fingerprint = Hash({{"stage", "eval"},
                                        {"model", model.fingerprint},
                                        {"gold", FileFingerprint(config.paths.gold_labels)},
                                        {"seed", config.eval.seed},
                                        {"bootstrap_resamples", config.eval.bootstrap_resamples},
                                        {"top_n", config.eval.top_n}});
  EvalResult result;
  result.report_file = request.report_file.value_or(request.model_dir / "report.jsonl");

  std::ostringstream report;
  io::ArtifactHeader header{"eval-report", fingerprint, {{"model", model.fingerprint}}};
  report << io::HeaderLine(header) << '\n';
  auto emit = [&](json record) {
    record["fingerprint"] = fingerprint;
    report << record.dump() << '\n';
  };

  emit({{"metric", "k"}, {"method", model.method}, {"value", model.k}});

  auto pair_metric = [&](const char *name, auto &&compute, std::optional<double> &slot) {
    try {
      const eval::PairMetric metric = compute(model.prediction, gold);
      json record{{"metric", name},
                  {"value", metric.value},
                  {"hits", metric.hits},
                  {"pairs", metric.pairs}};
      if (config.eval.bootstrap_resamples > 0) {
        const eval::Interval ci = eval::BootstrapInterval(
            metric.outcomes, config.eval.bootstrap_resamples, config.eval.seed);
        record["ci95"] = {ci.low, ci.high};
        record["bootstrap_resamples"] = config.eval.bootstrap_resamples;
      }
      slot = metric.value;
      emit(std::move(record));
    } catch (const DataError &e) {
      spdlog::warn("{}: {}", name, e.what());
      emit({{"metric", name}, {"value", nullptr}, {"error", e.what()}});
    }
  };
  pair_metric("pairwise_precision", eval::PairwisePrecision, result.precision);
  pair_metric("pairwise_recall", eval::PairwiseRecall, result.recall);

  // Prominent topics per gold topic set.
  std::map<std::string, std::set<std::string>> sets;
  for (const auto &[passage_id, entry] : gold) {
    if (!model.prediction.contains(passage_id)) continue;
    for (const std::string &topic : entry.topics) sets[topic].insert(passage_id);
  }
  for (const auto &[gold_topic, members] : sets) {
    emit({{"metric", "prominent_topics"},
          {"gold_topic", gold_topic},
          {"passages", members.size()},
          {"ranking", model.method == "lda" ? "mean_probability" : "mrr"},
          {"topics", TopicList(model, Prominence(model, members), config.eval.top_n)}});
  }

  // Corpus-wide prominence table.
  std::set<std::string> everything;
  for (const auto &[passage_id, ranked] : model.prediction) everything.insert(passage_id);
  const auto overall = Prominence(model, everything);
  emit({{"metric", model.method == "lda" ? "mean_topic_probability" : "mrr_prominence"},
        {"topics", TopicList(model, overall, overall.size())}});

  for (std::size_t i = 0; i < request.jsd_files.size(); ++i) {
    for (std::size_t j = i + 1; j < request.jsd_files.size(); ++j) {
      auto distribution = [](const fs::path &path) {
        std::vector<std::vector<std::string>> docs;
        for (const lm::Retelling &r : io::ReadRetellings(path)) {
          if (r.status == lm::RetellStatus::kOk) docs.push_back(preprocess::Tokenize(r.text));
        }
        return eval::MakeWordDistribution(docs);
      };
      emit({{"metric", "jsd"},
            {"a", request.jsd_files[i].filename().string()},
            {"b", request.jsd_files[j].filename().string()},
            {"value", eval::Jsd(distribution(request.jsd_files[i]),
                                distribution(request.jsd_files[j]))}});
    }
  }
  io::AtomicWrite(result.report_file, report.str());

  if (request.positives_file || !request.pr_topics.empty()) {
    if (model.method != "lda") throw DataError("threshold PR curves need an LDA model");
    if (!request.positives_file || request.pr_topics.empty()) {
      throw ConfigError("a PR curve needs both target topics and a positives file");
    }
    const std::set<std::string> positives = ReadIdList(*request.positives_file);
    const eval::PrCurve curve =
        eval::ThresholdPrCurve(model.dists, request.pr_topics, positives, cutoffs);
    std::ostringstream out;
    io::ArtifactHeader curve_header{"pr-curve", fingerprint, {{"model", model.fingerprint}}};
    out << io::HeaderLine(curve_header) << '\n';
    for (const eval::PrPoint &p : curve) {
      out << json{{"cutoff", p.cutoff},
                  {"precision", p.precision},
                  {"recall", p.recall},
                  {"predicted", p.predicted},
                  {"true_positives", p.true_positives},
                  {"topics", request.pr_topics}}
                 .dump()
          << '\n';
    }
    result.pr_curve_file = result.report_file.parent_path() / "pr_curve.jsonl";
    io::AtomicWrite(*result.pr_curve_file, out.str());
  }
  return result;
}

// ---------------------------------------------------------------------------
// keywords

KeywordsResult CmdKeywords(const PipelineConfig &config, std::optional<fs::path> passages_file) {
  if (config.keywords.seeds.empty()) throw ConfigError("keywords.seeds is empty");
  const fs::path input = passages_file.value_or(DefaultPassagesFile(config));
  RequireFile(input, "passages file");
  const std::vector<corpus::Passage> passages = io::ReadPassages(input);

  corpus::NpmiOptions options;
  options.window = config.keywords.window;
  options.threshold = config.keywords.threshold;
  options.min_candidate_df = config.keywords.min_df;
  const std::set<std::string> seeds(config.keywords.seeds.begin(), config.keywords.seeds.end());
  const std::vector<corpus::NpmiTerm> expanded = corpus::ExpandKeywordsNpmi(passages, seeds, options);

  corpus::KeywordList keywords;
  for (const std::string &seed : config.keywords.seeds) keywords.Add(seed, corpus::KeywordSource::kSeed);
  for (const corpus::NpmiTerm &term : expanded) {
    keywords.Add(term.term, corpus::KeywordSource::kNpmiExpanded);
  }
  if (!config.keywords.external.empty()) {
    for (const std::string &term : ReadIdList(config.keywords.external)) {
      keywords.Add(term, corpus::KeywordSource::kExternal);
    }
  }

  io::ArtifactHeader header;
  header.fingerprint = Hash({{"stage", "keywords"},
                             {"passages", ArtifactFingerprint(input)},
                             {"seeds", config.keywords.seeds},
                             {"external", OptionalFileFingerprint(config.keywords.external)},
                             {"threshold", config.keywords.threshold},
                             {"window", config.keywords.window},
                             {"min_df", config.keywords.min_df}});
  std::map<std::string, const corpus::NpmiTerm *> scores;
  for (const corpus::NpmiTerm &term : expanded) scores[term.term] = &term;

  std::ostringstream out;
  header.artifact = "keywords";
  out << io::HeaderLine(header) << '\n';
  for (const auto &[term, source] : keywords.provenance()) {
    json record{{"term", term}, {"provenance", corpus::KeywordSourceName(source)}};
    if (auto it = scores.find(term); it != scores.end()) {
      record["npmi"] = it->second->npmi;
      record["seed"] = it->second->best_seed;
    }
    out << record.dump() << '\n';
  }
  KeywordsResult result;
  result.keywords_file = config.paths.output_dir / "keywords.jsonl";
  result.passages_file = config.paths.output_dir / "keyword_passages.jsonl";
  io::AtomicWrite(result.keywords_file, out.str());
  const std::vector<corpus::Passage> kept = corpus::KeywordFilter(passages, keywords);
  header.artifact = "passages";
  io::WritePassages(result.passages_file, kept, header);
  result.expanded = expanded.size();
  result.passages = kept.size();
  spdlog::info("{} expanded keywords; {} of {} passages contain a keyword", expanded.size(),
               kept.size(), passages.size());
  return result;
}

// ---------------------------------------------------------------------------
// intruders

IntrudersResult CmdIntruders(const PipelineConfig &config, const fs::path &model_dir,
                             std::optional<fs::path> out_file) {
  const LoadedModel model = LoadModel(model_dir);
  const eval::TopRankIndex population(model.prediction);
  Rng rng(config.eval.seed);

  std::vector<std::string> ids;
  for (const auto &[id, ranked] : model.prediction) ids.push_back(id);
  rng.Shuffle(ids);

  std::map<std::string, const lda::DocTopicDist *> dist_of;
  for (const auto &d : model.dists) dist_of[d.doc_id] = &d;
  std::map<std::string, const tglite::TopicAssignment *> assignment_of;
  for (const auto &a : model.assignments) assignment_of[a.doc_id] = &a;

  io::ArtifactHeader header{"intruders",
                            Hash({{"stage", "intruders"},
                                  {"model", model.fingerprint},
                                  {"seed", config.eval.seed},
                                  {"count", config.eval.intruder_passages}}),
                            {{"model", model.fingerprint}}};
  std::ostringstream out;
  out << io::HeaderLine(header) << '\n';
  IntrudersResult result;
  for (const std::string &id : ids) {
    if (result.items >= config.eval.intruder_passages) break;
    const std::vector<std::string> &ranked = model.prediction.at(id);
    std::string intruder;
    try {
      if (model.method == "lda") {
        intruder = std::to_string(eval::SampleIntruder(*dist_of.at(id), population, rng));
      } else {
        intruder = eval::SampleIntruder(*assignment_of.at(id), model.pool, population, rng);
      }
    } catch (const DataError &e) {
      spdlog::warn("{}", e.what());
      ++result.skipped;
      continue;
    }
    std::vector<std::string> top(ranked.begin(), ranked.begin() + std::min<std::size_t>(3, ranked.size()));
    const eval::IntruderItem item = eval::MakeIntruderItem(id, top, intruder, rng);
    json shown = json::array();
    for (const std::string &topic : item.shown_topics) {
      auto it = model.display.find(topic);
      shown.push_back(it == model.display.end() ? topic : it->second);
    }
    out << json{{"passage_id", item.passage_id},
                {"shown_topics", shown},
                {"shown_ids", item.shown_topics},
                {"intruder_index", item.intruder_index},
                {"seed", config.eval.seed}}
               .dump()
        << '\n';
    ++result.items;
  }
  result.bundle_file = out_file.value_or(model_dir / "intruders.jsonl");
  io::AtomicWrite(result.bundle_file, out.str());
  return result;
}

}  // namespace retell::pipeline
