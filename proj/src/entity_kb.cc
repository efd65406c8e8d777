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

#include "erkit/entity_kb.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/locid.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "erkit/error.h"
#include "erkit/io.h"
#include "json.hpp"

namespace erkit {
namespace {

bool IsAsciiSpace(unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); }

std::string NormalizeAscii(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (IsAsciiSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c + ('a' - 'A') : c));
  }
  return out;
}

std::string NormalizeUnicode(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInvalidArgument, "ICU NFC normalizer unavailable");
  }
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  text = nfc->normalize(text, status);
  text.toLower(icu::Locale::getRoot());
  // Lowercasing can produce sequences that are no longer composed.
  text = nfc->normalize(text, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInvalidArgument, "NFC normalization failed");
  }

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < text.length();) {
    UChar32 cp = text.char32At(i);
    i += U16_LENGTH(cp);
    if (u_isUWhiteSpace(cp)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) collapsed.append(static_cast<UChar>(' '));
    pending_space = false;
    collapsed.append(cp);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

}  // namespace

std::string NormalizeName(std::string_view raw) {
  bool ascii = std::all_of(raw.begin(), raw.end(),
                           [](char c) { return static_cast<unsigned char>(c) < 0x80; });
  return ascii ? NormalizeAscii(raw) : NormalizeUnicode(raw);
}

EntityVocabulary EntityVocabulary::FromRows(std::span<const VocabularyRow> rows) {
  EntityVocabulary vocab;
  vocab.records_.reserve(rows.size());
  vocab.name_index_.reserve(rows.size());
  for (std::size_t row = 0; row < rows.size(); ++row) {
    std::string name = NormalizeName(rows[row].name);
    if (name.empty()) {
      throw Error(ErrorCode::kEmptyName, "row " + std::to_string(row),
                  static_cast<std::int64_t>(row));
    }
    auto id = static_cast<EntityId>(vocab.records_.size());
    auto [it, inserted] = vocab.name_index_.emplace(name, id);
    if (!inserted) throw Error(ErrorCode::kDuplicateName, "\"" + name + "\" appears twice");
    vocab.records_.push_back(EntityRecord{id, std::move(name), rows[row].summary});
  }
  return vocab;
}

std::vector<VocabularyRow> EntityVocabulary::ParseRows(std::string_view content) {
  std::vector<VocabularyRow> rows;
  std::optional<bool> is_json;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(content)) {
    ++line_no;
    if (IsBlank(line)) continue;
    if (!is_json) is_json = line.find_first_not_of(" \t") != std::string_view::npos &&
                            line[line.find_first_not_of(" \t")] == '{';
    if (*is_json) {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": " + e.what());
      }
      if (!obj.is_object() || !obj.contains("name") || !obj["name"].is_string()) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": missing \"name\"");
      }
      VocabularyRow row{obj["name"].get<std::string>(), ""};
      if (auto it = obj.find("summary"); it != obj.end() && it->is_string()) {
        row.summary = it->get<std::string>();
      }
      rows.push_back(std::move(row));
    } else {
      std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) {
        rows.push_back(VocabularyRow{std::string(line), ""});
      } else {
        rows.push_back(VocabularyRow{std::string(line.substr(0, tab)),
                                     std::string(line.substr(tab + 1))});
      }
    }
  }
  return rows;
}

EntityVocabulary EntityVocabulary::LoadFile(const std::filesystem::path& path) {
  std::vector<VocabularyRow> rows = ParseRows(ReadFile(path));
  return FromRows(rows);
}

std::optional<EntityId> EntityVocabulary::Lookup(std::string_view name) const {
  return LookupCanonical(NormalizeName(name));
}

std::optional<EntityId> EntityVocabulary::LookupCanonical(std::string_view canonical) const {
  auto it = name_index_.find(std::string(canonical));
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

const EntityRecord& EntityVocabulary::record(EntityId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= records_.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "entity id " + std::to_string(id), id);
  }
  return records_[static_cast<std::size_t>(id)];
}

}  // namespace erkit
