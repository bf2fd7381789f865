// Copyright 2026 The Tempora Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tempora/prompt.hpp"

namespace tempora {

/// Row-major float32 embedding matrix with a token surface and a frozen flag
/// per row.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return names_.size(); }

  std::span<const float> row(std::size_t i) const;
  const std::string& name(std::size_t i) const { return names_.at(i); }
  bool frozen(std::size_t i) const { return frozen_.at(i) != 0; }

  const std::vector<float>& data() const noexcept { return data_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<std::uint8_t>& frozen_mask() const noexcept { return frozen_; }

  void append(std::string name, std::span<const float> values, bool frozen);

  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

 private:
  std::size_t dim_;
  std::vector<float> data_;
  std::vector<std::string> names_;
  std::vector<std::uint8_t> frozen_;
};

using TokenId = std::uint32_t;

/// Any deterministic text -> token-id mapping.
using TokenizeFn = std::function<std::vector<TokenId>(std::string_view)>;

/// Bundled reference tokenizer. Whole-string overrides are consulted first;
/// otherwise the input is split into single characters ("0.04" -> "0", ".",
/// "0", "4") and each character is looked up in the piece table. A character
/// without a piece raises Error(kTokenizerGap).
class ReferenceTokenizer {
 public:
  ReferenceTokenizer() = default;
  ReferenceTokenizer(std::map<std::string, TokenId> pieces,
                     std::map<std::string, std::vector<TokenId>> overrides = {});

  std::vector<TokenId> operator()(std::string_view text) const;

  /// JSON: {"pieces": {"0": 3, ...}, "strings": {"30.00": [1, 2]}}.
  static ReferenceTokenizer from_json_file(const std::filesystem::path& path);
  static ReferenceTokenizer from_json_text(std::string_view json);

  const std::map<std::string, TokenId>& pieces() const noexcept { return pieces_; }

 private:
  std::map<std::string, TokenId> pieces_;
  std::map<std::string, std::vector<TokenId>> overrides_;
};

/// Mean of the base embeddings of the tokens produced for text. Duplicate ids
/// count with multiplicity. Accumulates in double over the sorted id list so
/// the result does not depend on token order.
///
/// Errors: kEmptyTokenization, kUnknownTokenId.
std::vector<double> semantic_init(std::string_view text, const TokenizeFn& tokenizer,
                                  const EmbeddingTable& base);

/// Copy of base followed by one frozen row per vocabulary token, each row the
/// semantic_init of the token's bare numeric string.
EmbeddingTable build_timestamp_embeddings(const TimestampVocab& vocab,
                                          const TokenizeFn& tokenizer,
                                          const EmbeddingTable& base);

// TPEB binary layout, all little-endian:
//   "TPEB" | u16 version=1 | u32 vocab_size | u32 dim |
//   vocab_size*dim f32 row-major | vocab_size u8 frozen flags (0/1)
// Token surfaces live in a UTF-8 sidecar, one per line, in row order.
inline constexpr std::uint16_t kTpebVersion = 1;

void write_tpeb(std::ostream& out, const EmbeddingTable& table);

/// Names are left empty; pair with read_names(). Throws Error(kCorruptFile).
EmbeddingTable read_tpeb(std::istream& in);

std::filesystem::path names_sidecar_path(const std::filesystem::path& table_path);

void save_table(const EmbeddingTable& table, const std::filesystem::path& path);

/// Reads the table and its sidecar (default: path + ".names").
EmbeddingTable load_table(const std::filesystem::path& path,
                          const std::filesystem::path& names_path = {});

}  // namespace tempora
