// Copyright 2026 The erkit Authors.
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

#ifndef ERKIT_IO_H_
#define ERKIT_IO_H_

// File helpers shared by the loaders and the pipeline commands.

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace erkit {

// Throws Error(kIoError).
std::string ReadFile(const std::filesystem::path& path);
// Writes to a temporary sibling then renames over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view content);

// Splits on '\n', dropping a trailing '\r' from each line. A final empty
// segment after the last newline is not returned.
std::vector<std::string_view> SplitLines(std::string_view content);
bool IsBlank(std::string_view line);

std::string Sha256Hex(std::string_view data);

// Parses every non-blank line as one JSON value. Throws Error(kParseError)
// naming the file and line on malformed input.
std::vector<nlohmann::ordered_json> ReadJsonLines(const std::filesystem::path& path);
std::vector<nlohmann::ordered_json> ParseJsonLines(std::string_view content,
                                                   std::string_view origin);

// Compact single-line serialization used for every JSON-lines output.
std::string ToJsonLine(const nlohmann::ordered_json& value);

// Appends lines to a file and flushes after each one.
class JsonLinesAppender {
 public:
  JsonLinesAppender(const std::filesystem::path& path, bool truncate);
  void Append(const nlohmann::ordered_json& value);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace erkit

#endif  // ERKIT_IO_H_
