// Copyright 2026 The asrprobe Authors
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

#include "report/csv_table.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace asrprobe::report {

bool Table::HasColumn(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

Table LoadTables(const std::vector<std::string>& paths) {
  if (paths.empty()) throw Error(ErrorCode::kInvalidInput, "no input CSV given");
  Table table;
  for (const auto& path : paths) {
    const auto rows = ParseCsv(ReadTextFile(path));
    if (rows.empty()) throw Error(ErrorCode::kIo, fmt::format("'{}' has no header row", path));
    if (table.header.empty()) {
      table.header = rows.front();
    } else if (rows.front() != table.header) {
      throw Error(ErrorCode::kContract, fmt::format("'{}' has a different column layout", path));
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != table.header.size()) {
        throw Error(ErrorCode::kParse, fmt::format("{}: row {} has {} fields, expected {}", path, r + 1,
                                                   rows[r].size(), table.header.size()));
      }
      Row row;
      for (std::size_t c = 0; c < rows[r].size(); ++c) row[table.header[c]] = rows[r][c];
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::optional<double> NumberField(const Row& row, const std::string& name) {
  auto it = row.find(name);
  if (it == row.end() || it->second.empty()) return std::nullopt;
  const std::string& s = it->second;
  double value = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw Error(ErrorCode::kParse, fmt::format("field '{}' holds non-numeric '{}'", name, s));
  }
  return value;
}

std::string TextField(const Row& row, const std::string& name) {
  auto it = row.find(name);
  return it == row.end() ? std::string() : it->second;
}

}  // namespace asrprobe::report
