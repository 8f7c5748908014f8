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

// Minimal comma-separated text handling shared by the file readers. Fields
// are unquoted; surrounding whitespace is trimmed; blank lines are skipped.

#ifndef LABELAUDIT_CSV_H_
#define LABELAUDIT_CSV_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace labelaudit::csv {

struct Record {
  std::size_t line = 0;  // 1-based line number in the source file
  std::vector<std::string> fields;
};

struct Table {
  std::string path;
  std::vector<std::string> header;  // empty when read without a header
  std::vector<Record> records;
};

// Reads the whole file. When `expect_header` is non-empty, the first
// non-blank line must match it field for field.
Table ReadFile(const std::string& path,
               const std::vector<std::string>& expect_header = {});

// Same, over an in-memory buffer. `path` is used only for messages.
Table ReadString(std::string_view text, const std::string& path,
                 const std::vector<std::string>& expect_header = {});

std::vector<std::string> SplitFields(std::string_view line);
std::string_view Trim(std::string_view s);

// Strict numeric parsing; throws ParseError naming path:line.
std::int64_t ParseInt(std::string_view field, const std::string& path,
                      std::size_t line);
double ParseDouble(std::string_view field, const std::string& path,
                   std::size_t line);

// Shortest decimal text that round-trips to the same double.
std::string FormatDouble(double value);

std::string ReadWholeFile(const std::string& path);
void WriteWholeFile(const std::string& path, std::string_view contents);

}  // namespace labelaudit::csv

#endif  // LABELAUDIT_CSV_H_
