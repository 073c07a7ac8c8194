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

#include "clickbait/matrix_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "clickbait/error.hpp"
#include "json.hpp"

namespace clickbait {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                         static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void write_header(std::ostream& out, const Magic& magic, std::uint32_t dim) {
  out.write(magic.data(), 4);
  put_u32(out, kFormatVersion);
  put_u32(out, dim);
}

void write_record(std::ostream& out, const Digest& key, std::span<const float> values) {
  out.write(reinterpret_cast<const char*>(key.data()), static_cast<std::streamsize>(key.size()));
  for (const float v : values) put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void write_keyed_rows(const std::filesystem::path& path, const Magic& magic, const KeyedRows& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  write_header(out, magic, rows.dim);
  for (std::size_t i = 0; i < rows.rows(); ++i) write_record(out, rows.keys[i], rows.row(i));
  if (!out) throw Error("write failed: " + path.string());
}

KeyedRows read_keyed_rows(const std::filesystem::path& path, const Magic& magic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), magic.data(), 4) != 0) {
    throw FormatError(path.string() + ": bad magic");
  }
  if (get_u32(bytes.data() + 4) != kFormatVersion) {
    throw FormatError(path.string() + ": unsupported format version");
  }
  KeyedRows rows;
  rows.dim = get_u32(bytes.data() + 8);
  const std::size_t record_bytes = 32 + 4 * static_cast<std::size_t>(rows.dim);
  const std::size_t payload = bytes.size() - kHeaderBytes;
  if (payload % record_bytes != 0) throw FormatError(path.string() + ": truncated record");
  const std::size_t n = payload / record_bytes;
  rows.keys.resize(n);
  rows.values.resize(n * rows.dim);
  const unsigned char* p = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < n; ++i) {
    std::memcpy(rows.keys[i].data(), p, 32);
    p += 32;
    for (std::size_t j = 0; j < rows.dim; ++j, p += 4) {
      rows.values[i * rows.dim + j] = std::bit_cast<float>(get_u32(p));
    }
  }
  return rows;
}

std::filesystem::path index_path(const std::filesystem::path& matrix_path) {
  return std::filesystem::path(matrix_path.string() + ".index.jsonl");
}

void write_index(const std::filesystem::path& path, const std::vector<IndexEntry>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& e : entries) {
    nlohmann::ordered_json j = {{"id", e.id}, {"label", e.label}};
    if (e.split != Split::kNone) j["split"] = std::string(to_string(e.split));
    out << j.dump() << '\n';
  }
}

std::vector<IndexEntry> read_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<IndexEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      entries.push_back({j.at("id").get<std::string>(), j.at("label").get<int>(),
                         split_from_string(j.value("split", std::string("none")))});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  }
  return entries;
}

Digest row_key(std::string_view id) { return sha256(id); }

}  // namespace clickbait
