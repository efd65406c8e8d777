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

#include "erkit/beam_search.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "erkit/error.h"
#include "erkit/objective.h"

namespace erkit {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void LogSoftmaxInPlace(std::span<double> row) {
  const double lse = objective::LogSumExp(row);
  for (double& x : row) x -= lse;
}

struct LiveBeam {
  std::vector<TokenId> tokens;
  double logprob = 0.0;
  TokenTrie::NodeId node = TokenTrie::kRoot;
};

struct Candidate {
  std::size_t parent = 0;
  TokenId token = 0;
  double logprob = 0.0;
};

struct Finished {
  std::vector<TokenId> tokens;
  double logprob = 0.0;
  double rank_score = 0.0;
  EntityId entity = TokenTrie::kNoEntity;
};

bool FinishedBefore(const Finished& a, const Finished& b) {
  if (a.rank_score != b.rank_score) return a.rank_score > b.rank_score;
  return a.tokens < b.tokens;
}

}  // namespace

HashedScorer::HashedScorer(std::uint64_t seed, std::size_t vocab_size, double scale)
    : seed_(seed), vocab_size_(vocab_size), scale_(scale) {
  if (vocab_size_ < 2) throw Error(ErrorCode::kInvalidArgument, "scorer needs >= 2 tokens");
}

void HashedScorer::NextLogProbs(std::string_view context, std::span<const TokenId> prefix,
                                std::span<double> out) const {
  if (out.size() != vocab_size_) {
    throw Error(ErrorCode::kDimensionMismatch, "scorer row size");
  }
  std::uint64_t h = SplitMix64(seed_);
  for (unsigned char c : context) h = SplitMix64(h ^ c);
  h = SplitMix64(h ^ 0xC0FFEEULL);
  for (TokenId t : prefix) h = SplitMix64(h ^ (static_cast<std::uint64_t>(t) + 1));
  for (std::size_t v = 0; v < vocab_size_; ++v) {
    const std::uint64_t r = SplitMix64(h + v);
    const double unit = static_cast<double>(r >> 11) * 0x1.0p-53;  // [0, 1)
    out[v] = scale_ * (2.0 * unit - 1.0);
  }
  LogSoftmaxInPlace(out);
}

TableScorer::TableScorer(std::size_t vocab_size, std::vector<double> default_logits)
    : vocab_size_(vocab_size), default_row_(std::move(default_logits)) {
  if (vocab_size_ < 2 || default_row_.size() != vocab_size_) {
    throw Error(ErrorCode::kInvalidArgument, "default row must have vocab_size entries");
  }
  LogSoftmaxInPlace(default_row_);
}

void TableScorer::SetRow(std::vector<TokenId> prefix, std::vector<double> logits) {
  if (logits.size() != vocab_size_) {
    throw Error(ErrorCode::kDimensionMismatch, "row must have vocab_size entries");
  }
  LogSoftmaxInPlace(logits);
  rows_[std::move(prefix)] = std::move(logits);
}

void TableScorer::NextLogProbs(std::string_view, std::span<const TokenId> prefix,
                               std::span<double> out) const {
  if (out.size() != vocab_size_) {
    throw Error(ErrorCode::kDimensionMismatch, "scorer row size");
  }
  auto it = rows_.find(std::vector<TokenId>(prefix.begin(), prefix.end()));
  const auto& row = it == rows_.end() ? default_row_ : it->second;
  std::copy(row.begin(), row.end(), out.begin());
}

std::unique_ptr<Scorer> LoadScorerFixture(const nlohmann::json& fixture,
                                          const Tokenizer& tokenizer) {
  try {
    const auto type = fixture.at("type").get<std::string>();
    const std::size_t vocab = tokenizer.vocab_size();
    if (type == "hashed") {
      return std::make_unique<HashedScorer>(fixture.at("seed").get<std::uint64_t>(), vocab,
                                            fixture.value("scale", 3.0));
    }
    if (type != "table") throw Error(ErrorCode::kInvalidArgument, "unknown scorer type " + type);
    const double fill = fixture.value("default_logit", 0.0);
    auto scorer = std::make_unique<TableScorer>(vocab, std::vector<double>(vocab, fill));
    for (const auto& row : fixture.value("rows", nlohmann::json::array())) {
      std::vector<double> logits(vocab, fill);
      for (const auto& [key, value] : row.at("logits").items()) {
        TokenId token = 0;
        if (key == "<eos>") {
          token = tokenizer.eos_id();
        } else {
          auto encoded = tokenizer.Encode(key);
          if (encoded.size() != 1) {
            throw Error(ErrorCode::kInvalidArgument, "table key must be one token: " + key);
          }
          token = encoded[0];
        }
        logits.at(token) = value.get<double>();
      }
      scorer->SetRow(tokenizer.Encode(row.at("prefix").get<std::string>()), std::move(logits));
    }
    return scorer;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("scorer fixture: ") + e.what());
  }
}

std::string_view DecodeModeName(DecodeMode mode) {
  switch (mode) {
    case DecodeMode::kUnconstrained: return "none";
    case DecodeMode::kLastStepFilter: return "last-step";
    case DecodeMode::kFullTrie: return "full";
  }
  return "";
}

DecodeMode ParseDecodeMode(std::string_view name) {
  if (name == "none" || name == "unconstrained") return DecodeMode::kUnconstrained;
  if (name == "last-step" || name == "last_step") return DecodeMode::kLastStepFilter;
  if (name == "full" || name == "full-trie") return DecodeMode::kFullTrie;
  throw Error(ErrorCode::kInvalidArgument, "unknown decode mode " + std::string(name));
}

std::vector<Hypothesis> BeamSearch(const Scorer& scorer, std::string_view context,
                                   const BeamConfig& config, const Tokenizer& tokenizer,
                                   const TokenTrie* trie, const EntityVocabulary* vocab) {
  if (config.beam_size == 0) throw Error(ErrorCode::kZeroBeam, "beam size must be >= 1");
  if (config.mode == DecodeMode::kFullTrie && trie == nullptr) {
    throw Error(ErrorCode::kMissingTrie, "full-trie decoding needs a trie");
  }
  if (config.mode == DecodeMode::kLastStepFilter && vocab == nullptr) {
    throw Error(ErrorCode::kMissingVocab, "last-step filtering needs a vocabulary");
  }
  if (scorer.vocab_size() != tokenizer.vocab_size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scorer and tokenizer vocabularies differ");
  }
  const bool constrained = config.mode == DecodeMode::kFullTrie;
  const TokenId eos = tokenizer.eos_id();
  if (constrained && trie->eos_id() != eos) {
    throw Error(ErrorCode::kInvalidArgument, "trie and tokenizer disagree on eos");
  }
  const std::size_t beam = config.beam_size;
  const std::size_t vocab_size = scorer.vocab_size();

  auto rank_score = [&](double logprob, std::size_t length) {
    if (config.length_penalty == 0.0) return logprob;
    return logprob / std::pow((5.0 + static_cast<double>(length)) / 6.0, config.length_penalty);
  };

  std::vector<LiveBeam> live(1);
  std::vector<Finished> finished;
  std::vector<double> row(vocab_size);
  std::vector<Candidate> candidates;
  std::vector<Candidate> local;

  for (std::size_t step = 0; step < config.max_len && !live.empty(); ++step) {
    candidates.clear();
    for (std::size_t b = 0; b < live.size(); ++b) {
      scorer.NextLogProbs(context, live[b].tokens, row);
      local.clear();
      auto consider = [&](TokenId t) {
        const double lp = row[t];
        if (std::isfinite(lp)) local.push_back(Candidate{b, t, live[b].logprob + lp});
      };
      if (constrained) {
        for (TokenId t : trie->ChildTokens(live[b].node)) consider(t);
      } else {
        for (std::size_t t = 0; t < vocab_size; ++t) consider(static_cast<TokenId>(t));
      }
      // At most `beam` survivors overall, so each parent contributes at most
      // its own top `beam`. Within one parent, lexicographic order is token
      // order.
      const std::size_t keep = std::min(beam, local.size());
      std::partial_sort(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(keep),
                        local.end(), [](const Candidate& x, const Candidate& y) {
                          if (x.logprob != y.logprob) return x.logprob > y.logprob;
                          return x.token < y.token;
                        });
      candidates.insert(candidates.end(), local.begin(),
                        local.begin() + static_cast<std::ptrdiff_t>(keep));
    }
    const std::size_t keep = std::min(beam, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                      candidates.end(), [&](const Candidate& x, const Candidate& y) {
                        if (x.logprob != y.logprob) return x.logprob > y.logprob;
                        if (x.parent != y.parent) return live[x.parent].tokens < live[y.parent].tokens;
                        return x.token < y.token;
                      });
    candidates.resize(keep);

    std::vector<LiveBeam> next;
    next.reserve(keep);
    for (const Candidate& c : candidates) {
      const LiveBeam& parent = live[c.parent];
      TokenTrie::NodeId node = TokenTrie::kRoot;
      if (constrained) node = *trie->Child(parent.node, c.token);
      if (c.token == eos) {
        Finished f{parent.tokens, c.logprob, rank_score(c.logprob, parent.tokens.size() + 1),
                   constrained ? trie->TerminalEntity(node) : TokenTrie::kNoEntity};
        finished.push_back(std::move(f));
        continue;
      }
      LiveBeam child{parent.tokens, c.logprob, node};
      child.tokens.push_back(c.token);
      next.push_back(std::move(child));
    }
    live = std::move(next);

    // Scores only decrease, so once `beam` finished hypotheses all beat the
    // best live one nothing can enter the returned list.
    if (config.length_penalty == 0.0 && finished.size() >= beam && !live.empty()) {
      std::nth_element(finished.begin(), finished.begin() + static_cast<std::ptrdiff_t>(beam - 1),
                       finished.end(), FinishedBefore);
      double best_live = -std::numeric_limits<double>::infinity();
      for (const auto& l : live) best_live = std::max(best_live, l.logprob);
      if (best_live < finished[beam - 1].rank_score) break;
    }
  }

  std::sort(finished.begin(), finished.end(), FinishedBefore);
  if (finished.size() > beam) finished.resize(beam);

  std::vector<Hypothesis> out;
  out.reserve(finished.size());
  for (auto& f : finished) {
    Hypothesis h;
    h.text = tokenizer.Decode(f.tokens);
    h.tokens = std::move(f.tokens);
    h.logprob = f.logprob;
    if (constrained) {
      h.entity = f.entity;
    } else if (vocab != nullptr) {
      h.entity = vocab->Lookup(h.text);
    }
    if (config.mode == DecodeMode::kLastStepFilter && !h.entity) continue;
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace erkit
