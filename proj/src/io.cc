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

#include "erkit/io.h"

#include <openssl/evp.h>

#include <array>
#include <sstream>

#include "erkit/error.h"

namespace erkit {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return buffer.str();
}

void WriteFileAtomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "rename " + path.string() + ": " + ec.message());
}

std::vector<std::string_view> SplitLines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool IsBlank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::string Sha256Hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::vector<nlohmann::ordered_json> ParseJsonLines(std::string_view content,
                                                   std::string_view origin) {
  std::vector<nlohmann::ordered_json> values;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(content)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      values.push_back(nlohmann::ordered_json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, std::string(origin) + ":" +
                                              std::to_string(line_no) + ": " + e.what(),
                  static_cast<std::int64_t>(line_no));
    }
  }
  return values;
}

std::vector<nlohmann::ordered_json> ReadJsonLines(const std::filesystem::path& path) {
  return ParseJsonLines(ReadFile(path), path.string());
}

std::string ToJsonLine(const nlohmann::ordered_json& value) {
  return value.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

JsonLinesAppender::JsonLinesAppender(const std::filesystem::path& path, bool truncate)
    : path_(path),
      out_(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app)) {
  if (!out_) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
}

void JsonLinesAppender::Append(const nlohmann::ordered_json& value) {
  out_ << ToJsonLine(value) << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorCode::kIoError, "write failed on " + path_.string());
}

}  // namespace erkit
