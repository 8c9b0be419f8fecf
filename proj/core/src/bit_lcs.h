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

#ifndef RETELL_SRC_BIT_LCS_H_
#define RETELL_SRC_BIT_LCS_H_

#include <array>
#include <bit>
#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace retell::internal {

// Bit-parallel LCS (Hyyro 2004) with the pattern packed into 64-bit words.
// The state after consuming a prefix of the text gives the LCS of the whole
// pattern with that prefix, so one pass over the text answers every prefix.
class BitLcs {
 public:
  explicit BitLcs(std::u32string_view pattern)
      : length_(pattern.size()), words_((pattern.size() + 63) / 64) {
    ascii_.fill({});
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      std::vector<uint64_t> &mask = MaskFor(pattern[i]);
      mask[i / 64] |= uint64_t{1} << (i % 64);
    }
    Reset();
  }

  void Reset() { state_.assign(words_, ~uint64_t{0}); }

  void Consume(char32_t c) {
    const std::vector<uint64_t> *mask = Lookup(c);
    if (mask == nullptr) return;  // U = 0 leaves the state unchanged
    uint64_t carry = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      const uint64_t v = state_[w];
      const uint64_t u = v & (*mask)[w];
      const uint64_t partial = v + u;
      const uint64_t sum = partial + carry;
      carry = (partial < v || sum < partial) ? 1 : 0;
      state_[w] = sum | (v & ~u);
    }
  }

  // LCS of the pattern with everything consumed since the last Reset().
  std::size_t Lcs() const {
    std::size_t zeros = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      uint64_t bits = ~state_[w];
      if (w + 1 == words_ && length_ % 64 != 0) {
        bits &= (uint64_t{1} << (length_ % 64)) - 1;
      }
      zeros += static_cast<std::size_t>(std::popcount(bits));
    }
    return zeros;
  }

  std::size_t pattern_length() const { return length_; }

 private:
  std::vector<uint64_t> &MaskFor(char32_t c) {
    std::vector<uint64_t> &mask = c < 128 ? ascii_[c] : other_[c];
    if (mask.empty()) mask.assign(words_, 0);
    return mask;
  }

  const std::vector<uint64_t> *Lookup(char32_t c) const {
    if (c < 128) return ascii_[c].empty() ? nullptr : &ascii_[c];
    auto it = other_.find(c);
    return it == other_.end() ? nullptr : &it->second;
  }

  std::size_t length_;
  std::size_t words_;
  std::array<std::vector<uint64_t>, 128> ascii_;
  std::unordered_map<char32_t, std::vector<uint64_t>> other_;
  std::vector<uint64_t> state_;
};

}  // namespace retell::internal

#endif  // RETELL_SRC_BIT_LCS_H_
