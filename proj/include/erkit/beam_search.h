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

#ifndef ERKIT_BEAM_SEARCH_H_
#define ERKIT_BEAM_SEARCH_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erkit/entity_kb.h"
#include "erkit/tokenizer.h"
#include "erkit/trie.h"
#include "json.hpp"

namespace erkit {

// Next-token log-probabilities given an opaque context and the tokens
// decoded so far. Rows must be normalized (logsumexp == 0) and the scorer
// deterministic.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::size_t vocab_size() const = 0;
  virtual void NextLogProbs(std::string_view context, std::span<const TokenId> prefix,
                            std::span<double> out) const = 0;
};

// Log-softmax of a pseudo-random logit row derived from (seed, context,
// prefix). Same inputs, same row.
class HashedScorer final : public Scorer {
 public:
  HashedScorer(std::uint64_t seed, std::size_t vocab_size, double scale = 3.0);
  std::size_t vocab_size() const override { return vocab_size_; }
  void NextLogProbs(std::string_view context, std::span<const TokenId> prefix,
                    std::span<double> out) const override;

 private:
  std::uint64_t seed_;
  std::size_t vocab_size_;
  double scale_;
};

// Explicit logit rows per prefix; prefixes without a row fall back to
// `default_logits`. Rows are log-softmaxed on insertion. Ignores context.
class TableScorer final : public Scorer {
 public:
  TableScorer(std::size_t vocab_size, std::vector<double> default_logits);
  void SetRow(std::vector<TokenId> prefix, std::vector<double> logits);

  std::size_t vocab_size() const override { return vocab_size_; }
  void NextLogProbs(std::string_view context, std::span<const TokenId> prefix,
                    std::span<double> out) const override;

 private:
  std::size_t vocab_size_;
  std::vector<double> default_row_;
  std::map<std::vector<TokenId>, std::vector<double>> rows_;
};

// Scorer fixture file (JSON):
//   {"type": "hashed", "seed": 7, "scale": 3.0}
//   {"type": "table", "default_logit": -4.0,
//    "rows": [{"prefix": "ab", "logits": {"c": 2.0, "<eos>": 1.0}}]}
// Table keys are single bytes of text or "<eos>"; prefixes are byte strings.
std::unique_ptr<Scorer> LoadScorerFixture(const nlohmann::json& fixture,
                                          const Tokenizer& tokenizer);

enum class DecodeMode { kUnconstrained, kLastStepFilter, kFullTrie };

std::string_view DecodeModeName(DecodeMode mode);
// "none"/"unconstrained", "last-step", "full". Throws kInvalidArgument.
DecodeMode ParseDecodeMode(std::string_view name);

inline constexpr std::size_t kDefaultBeamSize = 30;
inline constexpr std::size_t kDefaultMaxLen = 32;

struct BeamConfig {
  DecodeMode mode = DecodeMode::kLastStepFilter;
  std::size_t beam_size = kDefaultBeamSize;
  // Maximum tokens per hypothesis, eos included.
  std::size_t max_len = kDefaultMaxLen;
  // GNMT-style length penalty exponent; 0 ranks by raw log-probability.
  double length_penalty = 0.0;
};

struct Hypothesis {
  std::vector<TokenId> tokens;  // without the final eos
  std::string text;
  std::optional<EntityId> entity;
  double logprob = 0.0;
};

// Length-unnormalized beam search. Only hypotheses that emit eos within
// max_len are returned, best first (ties by token sequence), at most
// beam_size of them.
//
// kFullTrie restricts every step to trie children and needs `trie`.
// kLastStepFilter decodes unconstrained, then keeps hypotheses whose text is
// in `vocab` (possibly none). kUnconstrained fills `entity` when `vocab` is
// given. Throws kZeroBeam, kMissingTrie, kMissingVocab, kInvalidArgument.
std::vector<Hypothesis> BeamSearch(const Scorer& scorer, std::string_view context,
                                   const BeamConfig& config, const Tokenizer& tokenizer,
                                   const TokenTrie* trie, const EntityVocabulary* vocab);

}  // namespace erkit

#endif  // ERKIT_BEAM_SEARCH_H_
