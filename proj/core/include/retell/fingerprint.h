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

#ifndef RETELL_FINGERPRINT_H_
#define RETELL_FINGERPRINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace retell {

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view bytes, uint64_t seed = 0xcbf29ce484222325ULL);

// 16 lowercase hex digits of Fnv1a64(canonical).
std::string Fingerprint(std::string_view canonical);

// Fingerprint of a file's bytes. Throws DataError if unreadable.
std::string FileFingerprint(const std::filesystem::path &path);

}  // namespace retell

#endif  // RETELL_FINGERPRINT_H_
