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

#ifndef RETELL_RNG_H_
#define RETELL_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace retell {

// Portable random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; the distributions below are
// implemented here rather than taken from <random> because the standard
// library distributions differ across vendors. Seeded runs therefore
// reproduce bit-identically on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();

  // Uniform integer in [0, bound). bound must be > 0.
  uint64_t UniformInt(uint64_t bound);

  template <typename T>
  void Shuffle(std::vector<T> &items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(UniformInt(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace retell

#endif  // RETELL_RNG_H_
