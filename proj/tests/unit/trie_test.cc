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

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "common/error_matchers.h"
#include "common/oracles.h"
#include "common/test_util.h"
#include "erkit/trie.h"

namespace erkit {
namespace {

EntityVocabulary Vocab(const std::vector<std::string>& names) {
  std::vector<VocabularyRow> rows;
  for (const auto& n : names) rows.push_back({n, ""});
  return EntityVocabulary::FromRows(rows);
}

std::vector<TokenId> Tokens(std::string_view s) {
  std::vector<TokenId> out;
  for (unsigned char c : s) out.push_back(c);
  return out;
}

std::vector<TokenId> Allowed(const TokenTrie& trie, std::string_view prefix) {
  auto t = Tokens(prefix);
  auto span = trie.AllowedTokens(t);
  return {span.begin(), span.end()};
}

constexpr TokenId kEos = ByteTokenizer::kEos;

TEST(TokenTrieTest, SingleName) {
  ByteTokenizer tok;
  auto trie = TokenTrie::Build(Vocab({"ab"}), tok);
  EXPECT_EQ(trie.node_count(), 4u);
  EXPECT_EQ(trie.terminal_count(), 1u);
  EXPECT_EQ(Allowed(trie, ""), std::vector<TokenId>{'a'});
  EXPECT_EQ(Allowed(trie, "a"), std::vector<TokenId>{'b'});
  EXPECT_EQ(Allowed(trie, "ab"), std::vector<TokenId>{kEos});
  auto node = trie.Walk(std::vector<TokenId>{'a', 'b', kEos});
  ASSERT_TRUE(node);
  EXPECT_EQ(trie.TerminalEntity(*node), 0);
}

TEST(TokenTrieTest, SharedPrefix) {
  ByteTokenizer tok;
  auto trie = TokenTrie::Build(Vocab({"ab", "ac"}), tok);
  EXPECT_EQ(trie.node_count(), 6u);
  EXPECT_EQ(Allowed(trie, "a"), (std::vector<TokenId>{'b', 'c'}));
  EXPECT_TRUE(Allowed(trie, "x").empty());
  EXPECT_TRUE(Allowed(trie, "abz").empty());
}

TEST(TokenTrieTest, PrefixNameAllowsEosAndContinuation) {
  ByteTokenizer tok;
  auto trie = TokenTrie::Build(Vocab({"ab", "abc"}), tok);
  EXPECT_EQ(Allowed(trie, "ab"), (std::vector<TokenId>{'c', kEos}));
  EXPECT_EQ(Allowed(trie, "abc"), std::vector<TokenId>{kEos});
}

TEST(TokenTrieTest, EmptyVocabulary) {
  ByteTokenizer tok;
  auto trie = TokenTrie::Build(EntityVocabulary(), tok);
  EXPECT_EQ(trie.node_count(), 1u);
  EXPECT_TRUE(Allowed(trie, "").empty());
}

TEST(TokenTrieTest, RandomNamesRoundTripThroughPaths) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<int> letter('a', 'f');
  std::set<std::string> names;
  while (names.size() < 1000) {
    std::string s;
    for (int i = len(rng); i > 0; --i) s.push_back(static_cast<char>(letter(rng)));
    names.insert(s);
  }
  std::vector<std::string> list(names.begin(), names.end());
  std::shuffle(list.begin(), list.end(), rng);
  ByteTokenizer tok;
  auto vocab = Vocab(list);
  auto trie = TokenTrie::Build(vocab, tok);
  auto paths = testing::TriePaths(trie);
  ASSERT_EQ(paths.size(), list.size());
  for (const auto& [entity, tokens] : paths) {
    EXPECT_EQ(tok.Decode(tokens), vocab.name(entity));
  }
  // Every allowed token of every prefix leads somewhere.
  for (std::size_t i = 0; i < 100; ++i) {
    const std::string& name = list[i];
    for (std::size_t p = 0; p <= name.size(); ++p) {
      auto allowed = Allowed(trie, name.substr(0, p));
      ASSERT_FALSE(allowed.empty());
      EXPECT_TRUE(std::is_sorted(allowed.begin(), allowed.end()));
      const TokenId expected = p == name.size() ? kEos : static_cast<unsigned char>(name[p]);
      EXPECT_TRUE(std::binary_search(allowed.begin(), allowed.end(), expected));
    }
  }
}

TEST(TokenTrieTest, FromSequencesRejectsDuplicatesAndEos) {
  std::vector<std::vector<TokenId>> seqs = {{1, 2}, {1, 2}};
  std::vector<EntityId> ids = {0, 1};
  EXPECT_ERROR_CODE(TokenTrie::FromSequences(seqs, ids, 9), ErrorCode::kInvalidArgument);
  std::vector<std::vector<TokenId>> with_eos = {{1, 9}};
  std::vector<EntityId> one = {0};
  EXPECT_ERROR_CODE(TokenTrie::FromSequences(with_eos, one, 9), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(TokenTrie::FromSequences(seqs, one, 9), ErrorCode::kLengthMismatch);
}

TEST(TokenTrieTest, SerializeRoundTrip) {
  ByteTokenizer tok;
  auto trie = TokenTrie::Build(Vocab({"abc", "abd", "b", "ca"}), tok);
  std::stringstream buf;
  trie.Serialize(buf);
  EXPECT_EQ(buf.str().substr(0, 4), "RWTR");
  auto back = TokenTrie::Deserialize(buf);
  EXPECT_EQ(back, trie);

  testing::TempDir dir;
  trie.Save(dir / "t.trie");
  EXPECT_EQ(TokenTrie::Load(dir / "t.trie"), trie);
}

TEST(TokenTrieTest, CorruptFilesRejected) {
  ByteTokenizer tok;
  auto trie = TokenTrie::Build(Vocab({"abc", "b"}), tok);
  std::stringstream buf;
  trie.Serialize(buf);
  const std::string bytes = buf.str();

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream in1(bad_magic);
  EXPECT_ERROR_CODE(TokenTrie::Deserialize(in1), ErrorCode::kBadTrieFile);

  std::istringstream in2(bytes.substr(0, bytes.size() - 3));
  EXPECT_ERROR_CODE(TokenTrie::Deserialize(in2), ErrorCode::kBadTrieFile);

  std::string bad_version = bytes;
  bad_version[4] = 9;
  std::istringstream in3(bad_version);
  EXPECT_ERROR_CODE(TokenTrie::Deserialize(in3), ErrorCode::kBadTrieFile);

  testing::TempDir dir;
  EXPECT_ERROR_CODE(TokenTrie::Load(dir / "missing.trie"), ErrorCode::kIoError);
}

class DroppingTokenizer final : public Tokenizer {
 public:
  std::vector<TokenId> Encode(std::string_view text) const override {
    std::vector<TokenId> out;
    for (unsigned char c : text) {
      if (c != 'q') out.push_back(c);
    }
    return out;
  }
  std::string Decode(std::span<const TokenId> tokens) const override {
    return base_.Decode(tokens);
  }
  TokenId eos_id() const override { return ByteTokenizer::kEos; }
  std::size_t vocab_size() const override { return 257; }

 private:
  ByteTokenizer base_;
};

TEST(TokenTrieTest, LossyTokenizerRejected) {
  DroppingTokenizer tok;
  EXPECT_ERROR_DETAIL(TokenTrie::Build(Vocab({"abc", "quiz"}), tok),
                      ErrorCode::kTokenizerRoundTripFailure, 1);
}

TEST(ByteTokenizerTest, StopsAtEos) {
  ByteTokenizer tok;
  std::vector<TokenId> t = {'h', 'i', kEos, 'x'};
  EXPECT_EQ(tok.Decode(t), "hi");
  EXPECT_EQ(tok.Encode("\xc3\xa9"), (std::vector<TokenId>{0xc3, 0xa9}));
}

}  // namespace
}  // namespace erkit
