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

#ifndef RETELL_IO_H_
#define RETELL_IO_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "retell/corpus.h"
#include "retell/lda.h"
#include "retell/preprocess.h"
#include "retell/retelling.h"
#include "retell/tglite.h"

// Line-delimited JSON artifacts. Every file written here starts with a
// header record naming the artifact kind and the configuration fingerprint
// that produced it; readers accept files with or without that header.
namespace retell::io {

inline constexpr int kFormatVersion = 1;

struct ArtifactHeader {
  std::string artifact;
  std::string fingerprint;
  // Fingerprints of the artifacts this one was built from, by role.
  std::map<std::string, std::string> inputs;
  int format_version = kFormatVersion;
};

// Reads only the header line, if the file has one.
std::optional<ArtifactHeader> ReadHeader(const std::filesystem::path &path);

// Writes to a temporary sibling and renames, so readers never observe a
// partial file.
void AtomicWrite(const std::filesystem::path &path, const std::string &contents);

std::string HeaderLine(const ArtifactHeader &header);

void WritePassages(const std::filesystem::path &path, std::span<const corpus::Passage> passages,
                   const ArtifactHeader &header);
std::vector<corpus::Passage> ReadPassages(const std::filesystem::path &path,
                                          ArtifactHeader *header = nullptr);

std::string RetellingLine(const lm::Retelling &retelling);
void WriteRetellings(const std::filesystem::path &path, std::span<const lm::Retelling> retellings,
                     const ArtifactHeader &header);
std::vector<lm::Retelling> ReadRetellings(const std::filesystem::path &path,
                                          ArtifactHeader *header = nullptr);

// Sidecar records {term, id, df, frequency}, in id order.
void WriteVocabulary(const std::filesystem::path &path, const preprocess::Vocabulary &vocab,
                     const ArtifactHeader &header);
preprocess::Vocabulary ReadVocabulary(const std::filesystem::path &path,
                                      ArtifactHeader *header = nullptr);

// Records {doc_id, counts: [[term_id, count], ...]}.
void WriteBowDocs(const std::filesystem::path &path, std::span<const preprocess::BowDoc> docs,
                  const ArtifactHeader &header);
std::vector<preprocess::BowDoc> ReadBowDocs(const std::filesystem::path &path,
                                            ArtifactHeader *header = nullptr);

// Records {doc_id, probs: [...]}.
void WriteDocTopics(const std::filesystem::path &path, std::span<const lda::DocTopicDist> dists,
                    const ArtifactHeader &header);
std::vector<lda::DocTopicDist> ReadDocTopics(const std::filesystem::path &path,
                                             ArtifactHeader *header = nullptr);

// Versioned text model: header, config, then one record per document with
// its token ids and topic assignments. Counts are rebuilt on load.
void SaveLdaModel(const std::filesystem::path &path, const lda::LdaModel &model,
                  const ArtifactHeader &header);
lda::LdaModel LoadLdaModel(const std::filesystem::path &path, ArtifactHeader *header = nullptr);

// Records {label, description, origin_doc}.
void WriteTopicPool(const std::filesystem::path &path, const tglite::TopicPool &pool,
                    const ArtifactHeader &header);
tglite::TopicPool ReadTopicPool(const std::filesystem::path &path,
                                ArtifactHeader *header = nullptr);

// Records {doc_id, labels: [...]}.
void WriteAssignments(const std::filesystem::path &path,
                      std::span<const tglite::TopicAssignment> assignments,
                      const ArtifactHeader &header);
std::vector<tglite::TopicAssignment> ReadAssignments(const std::filesystem::path &path,
                                                     ArtifactHeader *header = nullptr);

struct QuoteRecord {
  std::string book_id;
  std::string quote;
  std::vector<std::string> labels;
};

// Records {book_id, quote, labels}.
std::vector<QuoteRecord> ReadQuotes(const std::filesystem::path &path);

}  // namespace retell::io

#endif  // RETELL_IO_H_
