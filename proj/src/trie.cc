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

#include "erkit/trie.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>

#include "erkit/error.h"

namespace erkit {
namespace {

constexpr std::array<char, 4> kMagic = {'R', 'W', 'T', 'R'};

template <typename T>
void WriteLe(std::ostream& out, T value) {
  static_assert(std::is_integral_v<T>);
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((u >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T ReadLe(std::istream& in) {
  using U = std::make_unsigned_t<T>;
  std::array<unsigned char, sizeof(T)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw Error(ErrorCode::kBadTrieFile, "truncated trie file");
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(bytes[i]) << (8 * i);
  return static_cast<T>(u);
}

}  // namespace

TokenTrie TokenTrie::Build(const EntityVocabulary& vocab, const Tokenizer& tokenizer) {
  std::vector<std::vector<TokenId>> sequences;
  std::vector<EntityId> entities;
  sequences.reserve(vocab.size());
  entities.reserve(vocab.size());
  for (const auto& record : vocab.records()) {
    auto tokens = tokenizer.Encode(record.canonical_name);
    if (tokenizer.Decode(tokens) != record.canonical_name ||
        std::find(tokens.begin(), tokens.end(), tokenizer.eos_id()) != tokens.end()) {
      throw Error(ErrorCode::kTokenizerRoundTripFailure, record.canonical_name, record.id);
    }
    sequences.push_back(std::move(tokens));
    entities.push_back(record.id);
  }
  return FromSequences(sequences, entities, tokenizer.eos_id());
}

TokenTrie TokenTrie::FromSequences(std::span<const std::vector<TokenId>> sequences,
                                   std::span<const EntityId> entities, TokenId eos) {
  if (sequences.size() != entities.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one entity id per sequence required");
  }
  for (const auto& seq : sequences) {
    if (std::find(seq.begin(), seq.end(), eos) != seq.end()) {
      throw Error(ErrorCode::kInvalidArgument, "sequence contains the eos token");
    }
  }
  // Token at `depth`, with eos standing in for the end of the sequence.
  auto token_at = [&](std::size_t seq, std::size_t depth) {
    const auto& s = sequences[seq];
    return depth < s.size() ? s[depth] : eos;
  };

  std::vector<std::uint32_t> order(sequences.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const std::size_t n = std::min(sequences[a].size(), sequences[b].size()) + 1;
    for (std::size_t d = 0; d < n; ++d) {
      const TokenId ta = token_at(a, d);
      const TokenId tb = token_at(b, d);
      if (ta != tb) return ta < tb;
    }
    return false;
  });

  TokenTrie trie;
  trie.eos_ = eos;
  // Each node owns the sorted range [lo, hi) of sequences passing through it.
  // Children blocks are allocated in depth-first order, so the blocks along
  // one root-to-leaf path sit close together in memory.
  std::vector<std::uint32_t> lo = {0};
  std::vector<std::uint32_t> hi = {static_cast<std::uint32_t>(order.size())};
  std::vector<std::uint32_t> depth = {0};
  trie.nodes_.push_back(Node{});

  std::vector<NodeId> stack = {kRoot};
  while (!stack.empty()) {
    const NodeId node = stack.back();
    stack.pop_back();
    if (node != kRoot && trie.nodes_[node].token == eos) continue;
    const auto first = static_cast<std::uint32_t>(trie.nodes_.size());
    std::uint32_t i = lo[node];
    const std::uint32_t end = hi[node];
    const std::uint32_t d = depth[node];
    while (i < end) {
      const TokenId t = token_at(order[i], d);
      std::uint32_t j = i + 1;
      while (j < end && token_at(order[j], d) == t) ++j;
      Node child;
      child.token = t;
      if (t == eos) {
        if (j - i > 1) throw Error(ErrorCode::kInvalidArgument, "duplicate token sequence");
        child.entity = entities[order[i]];
        ++trie.terminal_count_;
      }
      trie.nodes_.push_back(child);
      lo.push_back(i);
      hi.push_back(j);
      depth.push_back(d + 1);
      i = j;
    }
    const auto last = static_cast<std::uint32_t>(trie.nodes_.size());
    trie.nodes_[node].first_child = first;
    trie.nodes_[node].child_count = last - first;
    for (std::uint32_t c = last; c > first; --c) stack.push_back(c - 1);
  }
  // Childless nodes point at the end of the table.
  const auto n = static_cast<std::uint32_t>(trie.nodes_.size());
  trie.tokens_.reserve(n);
  for (auto& node : trie.nodes_) {
    if (node.child_count == 0) node.first_child = n;
    trie.tokens_.push_back(node.token);
  }
  return trie;
}

std::optional<TokenTrie::NodeId> TokenTrie::Child(NodeId node, TokenId token) const {
  const Node& parent = nodes_[node];
  const Node* first = nodes_.data() + parent.first_child;
  const Node* last = first + parent.child_count;
  const Node* it = first;
  if (parent.child_count <= 8) {
    while (it != last && it->token < token) ++it;
  } else {
    it = std::lower_bound(first, last, token,
                          [](const Node& x, TokenId t) { return x.token < t; });
  }
  if (it == last || it->token != token) return std::nullopt;
  return static_cast<NodeId>(it - nodes_.data());
}

std::optional<TokenTrie::NodeId> TokenTrie::Walk(std::span<const TokenId> prefix) const {
  if (nodes_.empty()) return std::nullopt;
  NodeId node = kRoot;
  for (TokenId t : prefix) {
    auto next = Child(node, t);
    if (!next) return std::nullopt;
    node = *next;
  }
  return node;
}

std::span<const TokenId> TokenTrie::ChildTokens(NodeId node) const {
  const Node& n = nodes_[node];
  return std::span<const TokenId>(tokens_.data() + n.first_child, n.child_count);
}

std::span<const TokenId> TokenTrie::AllowedTokens(std::span<const TokenId> prefix) const {
  auto node = Walk(prefix);
  if (!node) return {};
  return ChildTokens(*node);
}

void TokenTrie::Serialize(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  WriteLe<std::uint16_t>(out, kFormatVersion);
  WriteLe<std::uint32_t>(out, eos_);
  WriteLe<std::uint64_t>(out, nodes_.size());
  for (const Node& n : nodes_) {
    WriteLe<std::uint32_t>(out, n.first_child);
    WriteLe<std::uint32_t>(out, n.child_count);
    WriteLe<std::uint32_t>(out, n.token);
    WriteLe<std::int32_t>(out, n.entity);
  }
  if (!out) throw Error(ErrorCode::kIoError, "trie write failed");
}

TokenTrie TokenTrie::Deserialize(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error(ErrorCode::kBadTrieFile, "bad magic");
  const auto version = ReadLe<std::uint16_t>(in);
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kBadTrieFile, "unsupported version " + std::to_string(version));
  }
  TokenTrie trie;
  trie.eos_ = ReadLe<std::uint32_t>(in);
  const auto count = ReadLe<std::uint64_t>(in);
  if (count == 0 || count > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kBadTrieFile, "bad node count");
  }
  trie.nodes_.resize(count);
  trie.tokens_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    Node& n = trie.nodes_[i];
    n.first_child = ReadLe<std::uint32_t>(in);
    n.child_count = ReadLe<std::uint32_t>(in);
    n.token = ReadLe<std::uint32_t>(in);
    n.entity = ReadLe<std::int32_t>(in);
    if (static_cast<std::uint64_t>(n.first_child) + n.child_count > count) {
      throw Error(ErrorCode::kBadTrieFile, "child range out of bounds at node " + std::to_string(i));
    }
    trie.tokens_[i] = n.token;
    if (n.entity != kNoEntity) ++trie.terminal_count_;
  }
  return trie;
}

void TokenTrie::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  Serialize(out);
}

TokenTrie TokenTrie::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return Deserialize(in);
}

}  // namespace erkit
