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

#ifndef ERKIT_TRIE_H_
#define ERKIT_TRIE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "erkit/entity_kb.h"
#include "erkit/tokenizer.h"

namespace erkit {

// Prefix tree over tokenized entity names, stored as a flat node table.
//
// Every name is inserted followed by eos; the eos child is the terminal and
// carries the entity id, so "eos is allowed" falls out of the child list.
// The children of a node are consecutive node ids with ascending tokens,
// which makes the allowed-token set of any node a contiguous span. Child
// blocks are laid out depth-first.
class TokenTrie {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;
  static constexpr EntityId kNoEntity = -1;
  static constexpr std::uint16_t kFormatVersion = 1;

  TokenTrie() = default;

  // Throws kTokenizerRoundTripFailure when a name does not survive
  // encode/decode.
  static TokenTrie Build(const EntityVocabulary& vocab, const Tokenizer& tokenizer);

  // Sequences must not contain `eos`. Throws kInvalidArgument on duplicate
  // sequences.
  static TokenTrie FromSequences(std::span<const std::vector<TokenId>> sequences,
                                 std::span<const EntityId> entities, TokenId eos);

  std::optional<NodeId> Walk(std::span<const TokenId> prefix) const;
  std::optional<NodeId> Child(NodeId node, TokenId token) const;

  // Tokens that extend `prefix` toward some entity; eos included iff the
  // prefix is a complete name. Empty if the prefix leaves the trie.
  std::span<const TokenId> AllowedTokens(std::span<const TokenId> prefix) const;
  std::span<const TokenId> ChildTokens(NodeId node) const;
  NodeId FirstChild(NodeId node) const { return nodes_[node].first_child; }

  // Entity id for terminal (eos) nodes, kNoEntity elsewhere.
  EntityId TerminalEntity(NodeId node) const { return nodes_[node].entity; }
  TokenId TokenOf(NodeId node) const { return nodes_[node].token; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t terminal_count() const { return terminal_count_; }
  TokenId eos_id() const { return eos_; }

  // Little-endian: "RWTR", u16 version, u32 eos, u64 node count, then per
  // node u32 first_child, u32 child_count, u32 token, i32 entity.
  void Serialize(std::ostream& out) const;
  static TokenTrie Deserialize(std::istream& in);
  void Save(const std::filesystem::path& path) const;
  static TokenTrie Load(const std::filesystem::path& path);

  bool operator==(const TokenTrie&) const = default;

 private:
  TokenId eos_ = 0;
  std::size_t terminal_count_ = 0;
  struct Node {
    std::uint32_t first_child = 0;
    std::uint32_t child_count = 0;
    TokenId token = 0;
    EntityId entity = kNoEntity;
    bool operator==(const Node&) const = default;
  };

  // One record per node; walking a path touches one record per step plus
  // the sibling records it scans. `tokens_` mirrors Node::token so that
  // child token sets can be returned as spans.
  std::vector<Node> nodes_;
  std::vector<TokenId> tokens_;
};

}  // namespace erkit

#endif  // ERKIT_TRIE_H_
