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

#ifndef ERKIT_ENTITY_KB_H_
#define ERKIT_ENTITY_KB_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace erkit {

using EntityId = std::int32_t;

// NFC, lowercase, runs of Unicode whitespace collapsed to one space, trimmed.
// Idempotent. Empty input gives empty output.
std::string NormalizeName(std::string_view raw);

struct EntityRecord {
  EntityId id = 0;
  std::string canonical_name;
  // Knowledge-page summary shown to the refining model. May be empty.
  std::string summary;
};

struct VocabularyRow {
  std::string name;
  std::string summary;
};

// The entity vocabulary. Ids are positional (source order). Immutable once
// built, so concurrent reads need no locking.
class EntityVocabulary {
 public:
  EntityVocabulary() = default;

  // Throws Error(kEmptyName) with the row index as detail, or
  // Error(kDuplicateName) when two rows normalize to the same name.
  static EntityVocabulary FromRows(std::span<const VocabularyRow> rows);

  // JSON-lines ({"name", "summary"}) or two-column TSV (name TAB summary).
  // The format is chosen from the first non-blank line.
  static EntityVocabulary LoadFile(const std::filesystem::path& path);
  static std::vector<VocabularyRow> ParseRows(std::string_view content);

  std::optional<EntityId> Lookup(std::string_view name) const;
  // Skips normalization; `canonical` must already be normalized.
  std::optional<EntityId> LookupCanonical(std::string_view canonical) const;

  const EntityRecord& record(EntityId id) const;
  const std::string& name(EntityId id) const { return record(id).canonical_name; }
  std::span<const EntityRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  std::size_t index_size() const { return name_index_.size(); }

 private:
  std::vector<EntityRecord> records_;
  std::unordered_map<std::string, EntityId> name_index_;
};

}  // namespace erkit

#endif  // ERKIT_ENTITY_KB_H_
