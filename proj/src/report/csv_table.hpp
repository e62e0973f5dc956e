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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace asrprobe::report {

using Row = std::map<std::string, std::string>;

/// Rows of one or more results CSVs sharing a header.
struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  bool HasColumn(const std::string& name) const;
};

/// Concatenates CSVs. Differing headers are a contract error; a file with no
/// header at all is an I/O error.
Table LoadTables(const std::vector<std::string>& paths);

/// Numeric value of a field; nullopt when absent or empty. Non-numeric text
/// is a parse error.
std::optional<double> NumberField(const Row& row, const std::string& name);
std::string TextField(const Row& row, const std::string& name);

}  // namespace asrprobe::report
