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

#include "labelaudit/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "labelaudit/error.h"

namespace labelaudit::csv {

std::string_view Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> SplitFields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string_view piece =
        line.substr(start, comma == std::string_view::npos ? line.npos
                                                           : comma - start);
    fields.emplace_back(Trim(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

Table ReadString(std::string_view text, const std::string& path,
                 const std::vector<std::string>& expect_header) {
  Table table;
  table.path = path;
  bool header_pending = !expect_header.empty();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = Trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    auto fields = SplitFields(line);
    if (header_pending) {
      if (fields != expect_header) {
        std::string want;
        for (std::size_t i = 0; i < expect_header.size(); ++i) {
          if (i) want += ',';
          want += expect_header[i];
        }
        throw ParseError(path, line_no, "expected header '" + want + "'");
      }
      table.header = std::move(fields);
      header_pending = false;
    } else {
      table.records.push_back({line_no, std::move(fields)});
    }
    if (end == text.size()) break;
  }
  if (header_pending) throw ParseError(path, 1, "missing header");
  return table;
}

Table ReadFile(const std::string& path,
               const std::vector<std::string>& expect_header) {
  return ReadString(ReadWholeFile(path), path, expect_header);
}

std::int64_t ParseInt(std::string_view field, const std::string& path,
                      std::size_t line) {
  std::int64_t value = 0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(path, line, "not an integer: '" + std::string(field) + "'");
  }
  return value;
}

double ParseDouble(std::string_view field, const std::string& path,
                   std::size_t line) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last ||
      !std::isfinite(value)) {
    throw ParseError(path, line, "not a finite number: '" + std::string(field) + "'");
  }
  return value;
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string ReadWholeFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("io", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteWholeFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("io", "cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("io", "write failed for '" + path + "'");
}

}  // namespace labelaudit::csv
