// Copyright 2026 The qvmc Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qvmc {

/// Input text could not be parsed. `line` is 1-based, 0 if unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Requested object exceeds the dense simulation caps.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Experiment configuration is invalid; `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, const std::string& key)
      : std::runtime_error(key.empty() ? what : what + " (key: " + key + ")"), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace qvmc
