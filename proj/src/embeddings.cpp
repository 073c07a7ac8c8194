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

#include "clickbait/embeddings.hpp"

#include <cmath>
#include <mutex>
#include <unordered_set>

#include "clickbait/corpus.hpp"
#include "clickbait/error.hpp"
#include "clickbait/matrix_io.hpp"
#include "clickbait/rng.hpp"

namespace clickbait {

std::string_view to_string(Provider provider) {
  return provider == Provider::kRemote ? "remote" : "surrogate";
}

Provider provider_from_string(std::string_view name) {
  if (name == "remote" || name == "REMOTE") return Provider::kRemote;
  if (name == "surrogate" || name == "SURROGATE") return Provider::kSurrogate;
  throw PreconditionError("unknown embedding provider: " + std::string(name));
}

namespace {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::vector<double> trigram_counts(std::string_view text) {
  std::vector<double> counts(kTrigramBuckets, 0.0);
  const auto norm = normalize_text(text);
  if (norm.empty()) return counts;
  const std::string padded = " " + norm + " ";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    counts[fnv1a(std::string_view(padded).substr(i, 3)) % kTrigramBuckets] += 1.0;
  }
  return counts;
}

EmbeddingVector embed_surrogate(std::string_view text, std::uint64_t seed) {
  const auto counts = trigram_counts(text);
  std::vector<double> acc(kEmbeddingDim, 0.0);
  const std::uint64_t seed_mix = splitmix64(seed ^ 0x5EEDF00DULL);
  constexpr std::size_t kBlocks = kEmbeddingDim / 64;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (counts[b] == 0.0) continue;
    for (std::size_t block = 0; block < kBlocks; ++block) {
      const std::uint64_t signs = splitmix64(seed_mix ^ (b * kBlocks + block));
      for (std::size_t bit = 0; bit < 64; ++bit) {
        acc[block * 64 + bit] += ((signs >> bit) & 1U) ? counts[b] : -counts[b];
      }
    }
  }
  double norm = 0.0;
  for (const double v : acc) norm += v * v;
  norm = std::sqrt(norm);
  EmbeddingVector out{std::vector<float>(kEmbeddingDim, 0.0f), Provider::kSurrogate};
  if (norm > 0.0) {
    for (std::size_t j = 0; j < kEmbeddingDim; ++j) out.values[j] = static_cast<float>(acc[j] / norm);
  }
  return out;
}

std::string SurrogateEmbedder::tag() const { return "surrogate:" + std::to_string(seed_); }

std::vector<EmbeddingVector> SurrogateEmbedder::embed(std::span<const std::string> texts) {
  ++calls_;
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_surrogate(t, seed_));
  return out;
}

void check_embedding(std::span<const float> values) {
  if (values.size() != kEmbeddingDim) {
    throw PreconditionError("embedding must have " + std::to_string(kEmbeddingDim) +
                            " values, got " + std::to_string(values.size()));
  }
  for (const float v : values) {
    if (!std::isfinite(v)) throw PreconditionError("embedding has non-finite values");
  }
}

EmbeddingCache::EmbeddingCache(std::filesystem::path path, bool rebuild, std::uint32_t dim)
    : path_(std::move(path)), dim_(dim) {
  bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_) == 0;
  if (!fresh) {
    try {
      auto rows = read_keyed_rows(path_, kCacheMagic);
      if (rows.dim != dim_) throw FormatError(path_.string() + ": cache dimension mismatch");
      for (std::size_t i = 0; i < rows.rows(); ++i) {
        const auto r = rows.row(i);
        entries_[rows.keys[i]] = std::vector<float>(r.begin(), r.end());
      }
    } catch (const FormatError& e) {
      if (!rebuild) {
        throw FormatError(std::string("embedding cache is corrupt (") + e.what() +
                          "); rerun with the rebuild flag to discard it");
      }
      entries_.clear();
      fresh = true;
    }
  }
  if (fresh) {
    std::ofstream init(path_, std::ios::binary | std::ios::trunc);
    if (!init) throw Error("cannot create cache " + path_.string());
    write_header(init, kCacheMagic, dim_);
  }
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw Error("cannot open cache for append: " + path_.string());
}

Digest EmbeddingCache::key_for(std::string_view embedder_tag, std::string_view text) {
  std::string material(embedder_tag);
  material.push_back('\n');
  material += normalize_text(text);
  return sha256(material);
}

std::optional<std::vector<float>> EmbeddingCache::lookup(const Digest& key) const {
  std::shared_lock lock(mutex_);
  if (const auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

void EmbeddingCache::store(const Digest& key, std::span<const float> values) {
  if (values.size() != dim_) throw PreconditionError("cache store: dimension mismatch");
  std::unique_lock lock(mutex_);
  if (entries_.contains(key)) return;
  entries_.emplace(key, std::vector<float>(values.begin(), values.end()));
  write_record(out_, key, values);
  out_.flush();
  if (!out_) throw Error("cache write failed: " + path_.string());
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

LookupResult lookup_or_embed(std::span<const std::string> texts, Embedder& embedder,
                             EmbeddingCache& cache) {
  LookupResult result;
  result.vectors.resize(texts.size());
  const auto tag = embedder.tag();
  std::vector<Digest> keys;
  keys.reserve(texts.size());
  std::vector<std::string> to_fetch;
  std::unordered_map<Digest, std::vector<std::size_t>, DigestHash> pending;
  std::vector<Digest> pending_order;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    keys.push_back(EmbeddingCache::key_for(tag, texts[i]));
    if (auto hit = cache.lookup(keys.back())) {
      result.vectors[i] = {std::move(*hit), embedder.provider()};
      ++result.hits;
      continue;
    }
    ++result.misses;
    auto& slots = pending[keys.back()];
    if (slots.empty()) {
      to_fetch.push_back(texts[i]);
      pending_order.push_back(keys.back());
    }
    slots.push_back(i);
  }
  if (to_fetch.empty()) return result;

  const auto fetched = embedder.embed(to_fetch);
  if (fetched.size() != to_fetch.size()) {
    throw ProtocolError("embedder returned " + std::to_string(fetched.size()) + " vectors for " +
                        std::to_string(to_fetch.size()) + " texts");
  }
  for (std::size_t f = 0; f < fetched.size(); ++f) {
    check_embedding(fetched[f].values);
    cache.store(pending_order[f], fetched[f].values);
    for (const auto i : pending[pending_order[f]]) result.vectors[i] = fetched[f];
  }
  return result;
}

}  // namespace clickbait
