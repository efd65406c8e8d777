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

#ifndef ERKIT_TOKENIZER_H_
#define ERKIT_TOKENIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace erkit {

using TokenId = std::uint32_t;

// Text <-> token ids. Decode stops at the first eos. Decode(Encode(s)) must
// equal s for every name placed in a trie.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<TokenId> Encode(std::string_view text) const = 0;
  virtual std::string Decode(std::span<const TokenId> tokens) const = 0;
  virtual TokenId eos_id() const = 0;
  virtual std::size_t vocab_size() const = 0;
};

// One token per byte (0..255); eos is 256.
class ByteTokenizer final : public Tokenizer {
 public:
  static constexpr TokenId kEos = 256;

  std::vector<TokenId> Encode(std::string_view text) const override;
  std::string Decode(std::span<const TokenId> tokens) const override;
  TokenId eos_id() const override { return kEos; }
  std::size_t vocab_size() const override { return 257; }
};

}  // namespace erkit

#endif  // ERKIT_TOKENIZER_H_
