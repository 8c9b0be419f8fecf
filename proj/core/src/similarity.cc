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

#include <string_view>

#include "bit_lcs.h"
#include "retell/corpus.h"
#include "retell/text.h"

namespace retell::corpus {

std::size_t LcsLength(std::u32string_view a, std::u32string_view b) {
  // Pack the shorter string into the bit vector.
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return 0;
  internal::BitLcs lcs(a);
  for (char32_t c : b) lcs.Consume(c);
  return lcs.Lcs();
}

double NormalizedIndelSimilarity(std::u32string_view a, std::u32string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 100.0;
  const std::size_t distance = total - 2 * LcsLength(a, b);
  return 100.0 * (1.0 - static_cast<double>(distance) / static_cast<double>(total));
}

double NormalizedIndelSimilarity(std::string_view a, std::string_view b) {
  return NormalizedIndelSimilarity(text::DecodeUtf8(a), text::DecodeUtf8(b));
}

}  // namespace retell::corpus
