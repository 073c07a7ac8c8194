// Copyright 2026 The clickbait-hybrid Authors.
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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "clickbait/corpus.hpp"
#include "clickbait/hashing.hpp"

namespace clickbait {

// Versioned little-endian binary layout shared by the embedding cache and
// every matrix file:
//   header  : magic[4] | version u32 | dim u32
//   records : key[32] | dim x float32
// The row count is implied by the file size.
using Magic = std::array<char, 4>;
inline constexpr Magic kCacheMagic = {'C', 'B', 'E', 'C'};
inline constexpr Magic kMatrixMagic = {'C', 'B', 'M', 'X'};
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 12;

struct KeyedRows {
  std::uint32_t dim = 0;
  std::vector<Digest> keys;
  std::vector<float> values;  // row-major, keys.size() x dim

  std::size_t rows() const { return keys.size(); }
  std::span<const float> row(std::size_t i) const {
    return std::span(values).subspan(i * dim, dim);
  }
  friend bool operator==(const KeyedRows&, const KeyedRows&) = default;
};

void write_header(std::ostream& out, const Magic& magic, std::uint32_t dim);
void write_record(std::ostream& out, const Digest& key, std::span<const float> values);

void write_keyed_rows(const std::filesystem::path& path, const Magic& magic, const KeyedRows& rows);
// Throws FormatError on a wrong magic, unknown version or truncated record.
KeyedRows read_keyed_rows(const std::filesystem::path& path, const Magic& magic);

// One line per matrix row: {"id","label","split"}.
struct IndexEntry {
  std::string id;
  int label = 0;
  Split split = Split::kNone;
  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

std::filesystem::path index_path(const std::filesystem::path& matrix_path);
void write_index(const std::filesystem::path& path, const std::vector<IndexEntry>& entries);
std::vector<IndexEntry> read_index(const std::filesystem::path& path);

// Row key used in matrix files.
Digest row_key(std::string_view id);

}  // namespace clickbait
