// Copyright 2026 The lengthgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lengthgen {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid generation / run parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Text that does not match a grammar. line is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Program that parses but reads a variable before it is initialized.
class SemanticError : public Error {
 public:
  SemanticError(std::size_t line, char variable)
      : Error("line " + std::to_string(line) + ": variable '" +
              std::string(1, variable) + "' used before initialization"),
        line_(line),
        variable_(variable) {}
  std::size_t line() const { return line_; }
  char variable() const { return variable_; }

 private:
  std::size_t line_;
  char variable_;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

}  // namespace lengthgen
