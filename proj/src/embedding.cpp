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

#include "tempora/embedding.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "tempora/error.hpp"

namespace tempora {

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(Errc::kInvalidArgument, "embedding dim must be positive");
}

std::span<const float> EmbeddingTable::row(std::size_t i) const {
  if (i >= size()) throw Error(Errc::kUnknownTokenId, "row " + std::to_string(i));
  return {data_.data() + i * dim_, dim_};
}

void EmbeddingTable::append(std::string name, std::span<const float> values, bool frozen) {
  if (values.size() != dim_) {
    throw Error(Errc::kLengthMismatch, "row for '" + name + "' has " +
                                           std::to_string(values.size()) + " values, expected " +
                                           std::to_string(dim_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  names_.push_back(std::move(name));
  frozen_.push_back(frozen ? 1 : 0);
}

ReferenceTokenizer::ReferenceTokenizer(std::map<std::string, TokenId> pieces,
                                       std::map<std::string, std::vector<TokenId>> overrides)
    : pieces_(std::move(pieces)), overrides_(std::move(overrides)) {}

std::vector<TokenId> ReferenceTokenizer::operator()(std::string_view text) const {
  if (auto it = overrides_.find(std::string(text)); it != overrides_.end()) {
    return it->second;
  }
  std::vector<TokenId> ids;
  ids.reserve(text.size());
  for (char c : text) {
    auto it = pieces_.find(std::string(1, c));
    if (it == pieces_.end()) {
      throw Error(Errc::kTokenizerGap,
                  "no piece for character '" + std::string(1, c) + "' in \"" +
                      std::string(text) + "\"");
    }
    ids.push_back(it->second);
  }
  return ids;
}

ReferenceTokenizer ReferenceTokenizer::from_json_text(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kCorruptFile, std::string("tokenizer spec: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::kCorruptFile, "tokenizer spec must be an object");
  std::map<std::string, TokenId> pieces;
  std::map<std::string, std::vector<TokenId>> overrides;
  try {
    for (auto& [key, value] : doc.items()) {
      if (key == "pieces") {
        for (auto& [piece, id] : value.items()) pieces[piece] = id.get<TokenId>();
      } else if (key == "strings") {
        for (auto& [str, ids] : value.items()) overrides[str] = ids.get<std::vector<TokenId>>();
      } else {
        throw Error(Errc::kCorruptFile, "tokenizer spec: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kCorruptFile, std::string("tokenizer spec: ") + e.what());
  }
  return ReferenceTokenizer(std::move(pieces), std::move(overrides));
}

ReferenceTokenizer ReferenceTokenizer::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

std::vector<double> semantic_init(std::string_view text, const TokenizeFn& tokenizer,
                                  const EmbeddingTable& base) {
  std::vector<TokenId> ids = tokenizer(text);
  if (ids.empty()) {
    throw Error(Errc::kEmptyTokenization, "\"" + std::string(text) + "\" produced no tokens");
  }
  std::sort(ids.begin(), ids.end());
  std::vector<double> mean(base.dim(), 0.0);
  for (TokenId id : ids) {
    if (id >= base.size()) {
      throw Error(Errc::kUnknownTokenId, "token id " + std::to_string(id) + " for \"" +
                                             std::string(text) + "\" outside table of " +
                                             std::to_string(base.size()) + " rows");
    }
    const auto row = base.row(id);
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += static_cast<double>(row[d]);
  }
  const double n = static_cast<double>(ids.size());
  for (double& v : mean) v /= n;
  return mean;
}

EmbeddingTable build_timestamp_embeddings(const TimestampVocab& vocab,
                                          const TokenizeFn& tokenizer,
                                          const EmbeddingTable& base) {
  EmbeddingTable out = base;
  std::vector<float> row(base.dim());
  for (const auto& token : vocab.tokens()) {
    std::vector<double> mean;
    try {
      mean = semantic_init(token.numeric(), tokenizer, base);
    } catch (const Error& e) {
      throw Error(e.code(), "timestamp token " + token.surface + ": " + e.what());
    }
    std::transform(mean.begin(), mean.end(), row.begin(),
                   [](double v) { return static_cast<float>(v); });
    out.append(token.surface, row, /*frozen=*/true);
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'T', 'P', 'E', 'B'};

template <typename UInt>
void put_le(std::ostream& out, UInt value) {
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    out.put(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

template <typename UInt>
UInt get_le(const unsigned char* p) {
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    value |= static_cast<UInt>(static_cast<UInt>(p[i]) << (8 * i));
  }
  return value;
}

}  // namespace

void write_tpeb(std::ostream& out, const EmbeddingTable& table) {
  out.write(kMagic, 4);
  put_le<std::uint16_t>(out, kTpebVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(table.size()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(table.dim()));
  for (float v : table.data()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  for (std::uint8_t f : table.frozen_mask()) out.put(static_cast<char>(f));
  if (!out) throw Error(Errc::kIo, "write failed");
}

EmbeddingTable read_tpeb(std::istream& in) {
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  constexpr std::size_t kHeader = 4 + 2 + 4 + 4;
  if (bytes.size() < kHeader) throw Error(Errc::kCorruptFile, "truncated header");
  if (!std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw Error(Errc::kCorruptFile, "bad magic");
  }
  const auto version = get_le<std::uint16_t>(p + 4);
  if (version != kTpebVersion) {
    throw Error(Errc::kCorruptFile, "unsupported version " + std::to_string(version));
  }
  const auto vocab = get_le<std::uint32_t>(p + 6);
  const auto dim = get_le<std::uint32_t>(p + 10);
  if (dim == 0) throw Error(Errc::kCorruptFile, "dim is zero");
  const std::uint64_t expected = kHeader + std::uint64_t{vocab} * dim * 4 + vocab;
  if (bytes.size() != expected) {
    throw Error(Errc::kCorruptFile, "size " + std::to_string(bytes.size()) + " bytes, header implies " +
                                        std::to_string(expected));
  }
  EmbeddingTable table(dim);
  std::vector<float> row(dim);
  const unsigned char* values = p + kHeader;
  const unsigned char* flags = values + std::size_t{vocab} * dim * 4;
  for (std::uint32_t r = 0; r < vocab; ++r) {
    for (std::uint32_t d = 0; d < dim; ++d) {
      row[d] = std::bit_cast<float>(get_le<std::uint32_t>(values + (std::size_t{r} * dim + d) * 4));
    }
    if (flags[r] > 1) {
      throw Error(Errc::kCorruptFile, "frozen flag of row " + std::to_string(r) + " is not 0/1");
    }
    table.append("", row, flags[r] == 1);
  }
  return table;
}

std::filesystem::path names_sidecar_path(const std::filesystem::path& table_path) {
  return std::filesystem::path(table_path.string() + ".names");
}

void save_table(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  write_tpeb(out, table);
  std::ofstream names(names_sidecar_path(path), std::ios::binary);
  if (!names) throw Error(Errc::kIo, "cannot write " + names_sidecar_path(path).string());
  for (const auto& name : table.names()) names << name << '\n';
}

EmbeddingTable load_table(const std::filesystem::path& path,
                          const std::filesystem::path& names_path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  const EmbeddingTable raw = read_tpeb(in);

  const auto sidecar = names_path.empty() ? names_sidecar_path(path) : names_path;
  std::ifstream names_in(sidecar, std::ios::binary);
  if (!names_in) throw Error(Errc::kIo, "cannot open names sidecar " + sidecar.string());
  std::vector<std::string> names;
  for (std::string line; std::getline(names_in, line);) names.push_back(line);
  if (names.size() != raw.size()) {
    throw Error(Errc::kCorruptFile, "sidecar lists " + std::to_string(names.size()) +
                                        " names for " + std::to_string(raw.size()) + " rows");
  }
  EmbeddingTable table(raw.dim());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    table.append(std::move(names[i]), raw.row(i), raw.frozen(i));
  }
  return table;
}

}  // namespace tempora
