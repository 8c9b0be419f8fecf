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

#include "retell/io.h"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "retell/error.h"

namespace retell::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json HeaderJson(const ArtifactHeader &header) {
  return json{{"artifact", header.artifact},
              {"format_version", header.format_version},
              {"fingerprint", header.fingerprint},
              {"inputs", header.inputs}};
}

bool IsHeader(const json &record) {
  return record.is_object() && record.contains("artifact") && record.contains("fingerprint");
}

ArtifactHeader ParseHeader(const json &record) {
  ArtifactHeader header;
  header.artifact = record.at("artifact").get<std::string>();
  header.fingerprint = record.at("fingerprint").get<std::string>();
  header.format_version = record.value("format_version", kFormatVersion);
  if (record.contains("inputs")) {
    header.inputs = record.at("inputs").get<std::map<std::string, std::string>>();
  }
  if (header.format_version != kFormatVersion) {
    throw DataError(fmt::format("unsupported format version {} for {}", header.format_version,
                                header.artifact));
  }
  return header;
}

// Calls visit(record) for every non-header record.
template <typename Visitor>
void ReadRecords(const fs::path &path, ArtifactHeader *header, Visitor &&visit) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot read {}", path.string()));
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json record = json::parse(line);
      if (line_number == 1 && IsHeader(record)) {
        if (header != nullptr) *header = ParseHeader(record);
        continue;
      }
      visit(record);
    } catch (const json::exception &e) {
      throw DataError(fmt::format("{}:{}: {}", path.string(), line_number, e.what()));
    }
  }
}

class Writer {
 public:
  explicit Writer(const ArtifactHeader &header) { out_ << HeaderLine(header) << '\n'; }
  void Add(const json &record) { out_ << record.dump() << '\n'; }
  void Add(const std::string &line) { out_ << line << '\n'; }
  void Commit(const fs::path &path) { AtomicWrite(path, out_.str()); }

 private:
  std::ostringstream out_;
};

}  // namespace

std::string HeaderLine(const ArtifactHeader &header) { return HeaderJson(header).dump(); }

std::optional<ArtifactHeader> ReadHeader(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot read {}", path.string()));
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  try {
    const json record = json::parse(line);
    if (!IsHeader(record)) return std::nullopt;
    return ParseHeader(record);
  } catch (const json::exception &) {
    return std::nullopt;
  }
}

void AtomicWrite(const fs::path &path, const std::string &contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path temp = path.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(fmt::format("cannot write {}", temp.string()));
    out << contents;
    out.flush();
    if (!out) throw DataError(fmt::format("error writing {}", temp.string()));
  }
  fs::rename(temp, path);
}

void WritePassages(const fs::path &path, std::span<const corpus::Passage> passages,
                   const ArtifactHeader &header) {
  Writer writer(header);
  for (const corpus::Passage &p : passages) {
    writer.Add(json{{"passage_id", p.passage_id},
                    {"book_id", p.book_id},
                    {"paragraph_range", {p.paragraph_range.begin, p.paragraph_range.end}},
                    {"text", p.text},
                    {"token_count", p.token_count}});
  }
  writer.Commit(path);
}

std::vector<corpus::Passage> ReadPassages(const fs::path &path, ArtifactHeader *header) {
  std::vector<corpus::Passage> passages;
  ReadRecords(path, header, [&](const json &r) {
    corpus::Passage p;
    p.passage_id = r.at("passage_id").get<std::string>();
    p.book_id = r.at("book_id").get<std::string>();
    const json &range = r.at("paragraph_range");
    p.paragraph_range = {range.at(0).get<std::size_t>(), range.at(1).get<std::size_t>()};
    p.text = r.at("text").get<std::string>();
    p.token_count = r.at("token_count").get<std::size_t>();
    passages.push_back(std::move(p));
  });
  return passages;
}

std::string RetellingLine(const lm::Retelling &r) {
  json record{{"passage_id", r.passage_id},
              {"verb", std::string(lm::VerbName(r.verb))},
              {"model_id", r.model_id},
              {"run_id", r.run_id},
              {"text", r.text},
              {"status", r.status == lm::RetellStatus::kOk ? "ok" : "failed"},
              {"attempts", r.attempts}};
  if (!r.error.empty()) record["error"] = r.error;
  return record.dump();
}

void WriteRetellings(const fs::path &path, std::span<const lm::Retelling> retellings,
                     const ArtifactHeader &header) {
  Writer writer(header);
  for (const lm::Retelling &r : retellings) writer.Add(RetellingLine(r));
  writer.Commit(path);
}

std::vector<lm::Retelling> ReadRetellings(const fs::path &path, ArtifactHeader *header) {
  std::vector<lm::Retelling> out;
  ReadRecords(path, header, [&](const json &r) {
    lm::Retelling retelling;
    retelling.passage_id = r.at("passage_id").get<std::string>();
    retelling.verb = lm::ParseVerb(r.at("verb").get<std::string>());
    retelling.model_id = r.value("model_id", "");
    retelling.run_id = r.value("run_id", "run0");
    retelling.text = r.value("text", "");
    retelling.status = r.value("status", "ok") == "ok" ? lm::RetellStatus::kOk
                                                       : lm::RetellStatus::kFailed;
    retelling.error = r.value("error", "");
    retelling.attempts = r.value("attempts", 0);
    out.push_back(std::move(retelling));
  });
  return out;
}

void WriteVocabulary(const fs::path &path, const preprocess::Vocabulary &vocab,
                     const ArtifactHeader &header) {
  Writer writer(header);
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    const auto &entry = vocab.entries()[id];
    writer.Add(json{{"term", entry.term},
                    {"id", id},
                    {"df", entry.df},
                    {"frequency", entry.frequency}});
  }
  writer.Commit(path);
}

preprocess::Vocabulary ReadVocabulary(const fs::path &path, ArtifactHeader *header) {
  std::vector<preprocess::Vocabulary::Entry> entries;
  std::size_t num_docs = 0;
  ReadRecords(path, header, [&](const json &r) {
    const auto id = r.at("id").get<std::size_t>();
    if (id != entries.size()) {
      throw DataError(fmt::format("{}: vocabulary ids must be dense and ordered", path.string()));
    }
    entries.push_back({r.at("term").get<std::string>(), r.at("df").get<std::size_t>(),
                       r.value("frequency", std::size_t{0})});
  });
  return preprocess::Vocabulary(std::move(entries), num_docs);
}

void WriteBowDocs(const fs::path &path, std::span<const preprocess::BowDoc> docs,
                  const ArtifactHeader &header) {
  Writer writer(header);
  for (const preprocess::BowDoc &doc : docs) {
    json counts = json::array();
    for (const auto &[id, count] : doc.counts) counts.push_back({id, count});
    writer.Add(json{{"doc_id", doc.doc_id}, {"counts", counts}});
  }
  writer.Commit(path);
}

std::vector<preprocess::BowDoc> ReadBowDocs(const fs::path &path, ArtifactHeader *header) {
  std::vector<preprocess::BowDoc> docs;
  ReadRecords(path, header, [&](const json &r) {
    preprocess::BowDoc doc;
    doc.doc_id = r.at("doc_id").get<std::string>();
    for (const json &pair : r.at("counts")) {
      doc.counts.emplace_back(pair.at(0).get<preprocess::TermId>(), pair.at(1).get<uint32_t>());
    }
    docs.push_back(std::move(doc));
  });
  return docs;
}

void WriteDocTopics(const fs::path &path, std::span<const lda::DocTopicDist> dists,
                    const ArtifactHeader &header) {
  Writer writer(header);
  for (const lda::DocTopicDist &dist : dists) {
    writer.Add(json{{"doc_id", dist.doc_id}, {"probs", dist.probs}});
  }
  writer.Commit(path);
}

std::vector<lda::DocTopicDist> ReadDocTopics(const fs::path &path, ArtifactHeader *header) {
  std::vector<lda::DocTopicDist> dists;
  ReadRecords(path, header, [&](const json &r) {
    dists.push_back({r.at("doc_id").get<std::string>(), r.at("probs").get<std::vector<double>>()});
  });
  return dists;
}

void SaveLdaModel(const fs::path &path, const lda::LdaModel &model, const ArtifactHeader &header) {
  Writer writer(header);
  const lda::LdaConfig &c = model.config();
  writer.Add(json{{"config",
                   {{"k", c.k},
                    {"alpha", c.alpha},
                    {"beta", c.beta},
                    {"iterations", c.iterations},
                    {"burn_in", c.burn_in},
                    {"seed", c.seed}}},
                  {"vocab_size", model.vocab_size()},
                  {"num_docs", model.num_docs()}});
  for (std::size_t d = 0; d < model.num_docs(); ++d) {
    writer.Add(json{{"doc_id", model.doc_ids()[d]},
                    {"words", model.words()[d]},
                    {"topics", model.assignments()[d]}});
  }
  writer.Commit(path);
}

lda::LdaModel LoadLdaModel(const fs::path &path, ArtifactHeader *header) {
  std::optional<lda::LdaConfig> config;
  std::size_t vocab_size = 0;
  std::vector<std::string> ids;
  std::vector<std::vector<preprocess::TermId>> words;
  std::vector<std::vector<uint32_t>> topics;
  ReadRecords(path, header, [&](const json &r) {
    if (!config) {
      const json &c = r.at("config");
      config = lda::LdaConfig{c.at("k").get<int>(),          c.at("alpha").get<double>(),
                              c.at("beta").get<double>(),    c.at("iterations").get<int>(),
                              c.at("burn_in").get<int>(),    c.at("seed").get<uint64_t>()};
      vocab_size = r.at("vocab_size").get<std::size_t>();
      return;
    }
    ids.push_back(r.at("doc_id").get<std::string>());
    words.push_back(r.at("words").get<std::vector<preprocess::TermId>>());
    topics.push_back(r.at("topics").get<std::vector<uint32_t>>());
  });
  if (!config) throw DataError(fmt::format("{}: missing model configuration", path.string()));
  return lda::LdaModel(*config, vocab_size, std::move(ids), std::move(words), std::move(topics));
}

void WriteTopicPool(const fs::path &path, const tglite::TopicPool &pool,
                    const ArtifactHeader &header) {
  Writer writer(header);
  for (const tglite::PoolTopic &topic : pool.topics()) {
    writer.Add(json{{"label", topic.label},
                    {"description", topic.description},
                    {"origin_doc", topic.origin_doc}});
  }
  writer.Commit(path);
}

tglite::TopicPool ReadTopicPool(const fs::path &path, ArtifactHeader *header) {
  tglite::TopicPool pool;
  ReadRecords(path, header, [&](const json &r) {
    pool.Add({r.at("label").get<std::string>(), r.value("description", ""),
              r.value("origin_doc", "")});
  });
  return pool;
}

void WriteAssignments(const fs::path &path, std::span<const tglite::TopicAssignment> assignments,
                      const ArtifactHeader &header) {
  Writer writer(header);
  for (const tglite::TopicAssignment &a : assignments) {
    writer.Add(json{{"doc_id", a.doc_id}, {"labels", a.ranked_labels}});
  }
  writer.Commit(path);
}

std::vector<tglite::TopicAssignment> ReadAssignments(const fs::path &path,
                                                     ArtifactHeader *header) {
  std::vector<tglite::TopicAssignment> out;
  ReadRecords(path, header, [&](const json &r) {
    out.push_back({r.at("doc_id").get<std::string>(),
                   r.at("labels").get<std::vector<std::string>>()});
  });
  return out;
}

std::vector<QuoteRecord> ReadQuotes(const fs::path &path) {
  std::vector<QuoteRecord> quotes;
  ReadRecords(path, nullptr, [&](const json &r) {
    QuoteRecord q;
    q.book_id = r.at("book_id").get<std::string>();
    q.quote = r.at("quote").get<std::string>();
    if (r.contains("labels")) q.labels = r.at("labels").get<std::vector<std::string>>();
    quotes.push_back(std::move(q));
  });
  return quotes;
}

}  // namespace retell::io
