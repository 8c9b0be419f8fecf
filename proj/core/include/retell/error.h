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

#ifndef RETELL_ERROR_H_
#define RETELL_ERROR_H_

#include <stdexcept>
#include <string>

namespace retell {

// Failure classes. The CLI maps them onto exit codes 1, 2 and 3.
enum class ErrorKind {
  kConfig,     // bad usage, missing settings or credentials
  kData,       // malformed input, violated precondition, empty result
  kTransport,  // LM endpoint unreachable or returned an error
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &message)
      : Error(ErrorKind::kConfig, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string &message)
      : Error(ErrorKind::kData, message) {}
};

class TransportError : public Error {
 public:
  // Transient failures (timeouts, 429, 5xx) are retried; others are not.
  TransportError(const std::string &message, bool transient = true)
      : Error(ErrorKind::kTransport, message), transient_(transient) {}

  bool transient() const { return transient_; }

 private:
  bool transient_;
};

}  // namespace retell

#endif  // RETELL_ERROR_H_
