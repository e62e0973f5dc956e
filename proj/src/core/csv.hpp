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

#include <string>
#include <string_view>
#include <vector>

namespace asrprobe {

/// Quotes a field when it holds a comma, quote or newline (RFC 4180).
std::string CsvEscape(std::string_view field);

/// Splits RFC 4180 text into rows of fields. A trailing newline does not
/// produce an empty row.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

std::string ReadTextFile(const std::string& path);

}  // namespace asrprobe
