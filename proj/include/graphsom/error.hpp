// Copyright 2026 The graphsom Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graphsom {

// Root of everything the library throws. The C API maps each subclass onto
// one gs_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or inconsistent inputs (wrong sizes, out-of-range indices,
// missing run parameters).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. line() is 1-based, or 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Non-finite data, solver non-convergence, indefinite kernels.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// An input file could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

// A requested output could not be written.
class OutputError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace graphsom
