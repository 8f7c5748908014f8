// Copyright 2026 The labelaudit Authors.
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

#ifndef LABELAUDIT_ERROR_H_
#define LABELAUDIT_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace labelaudit {

// Coarse error classes. The CLI maps these onto its exit codes.
enum class ErrorKind {
  kUsage,     // bad arguments or configuration
  kData,      // malformed or inconsistent input data
  kInternal,  // invariant violation inside the toolkit
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message),
        kind_(kind),
        module_(std::move(module)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& module() const { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

// Raised by the file readers; carries the offending file and 1-based line.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line,
             const std::string& message, std::string module = "io")
      : Error(ErrorKind::kData, std::move(module),
              file + ":" + std::to_string(line) + ": " + message),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

inline Error DataError(const std::string& module, const std::string& message) {
  return Error(ErrorKind::kData, module, message);
}

inline Error UsageError(const std::string& module,
                        const std::string& message) {
  return Error(ErrorKind::kUsage, module, message);
}

}  // namespace labelaudit

#endif  // LABELAUDIT_ERROR_H_
