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

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clickbait/hashing.hpp"

namespace clickbait {

inline constexpr std::size_t kEmbeddingDim = 3072;
inline constexpr std::size_t kTrigramBuckets = 4096;

enum class Provider { kRemote, kSurrogate };

std::string_view to_string(Provider provider);
Provider provider_from_string(std::string_view name);

struct EmbeddingVector {
  std::vector<float> values;
  Provider provider = Provider::kSurrogate;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

// Offline stand-in: character-trigram counts hashed into 4096 buckets,
// projected to 3072 dims by a seeded +/-1 matrix, then L2-normalized.
// Empty text maps to the zero vector.
EmbeddingVector embed_surrogate(std::string_view text, std::uint64_t seed);

// Raw hashed trigram counts (before projection). Exposed for tests.
std::vector<double> trigram_counts(std::string_view text);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual Provider provider() const = 0;
  // Distinguishes configurations of one provider (surrogate seed, remote
  // model) so cached vectors never mix.
  virtual std::string tag() const = 0;
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;
};

class SurrogateEmbedder final : public Embedder {
 public:
  explicit SurrogateEmbedder(std::uint64_t seed = 0) : seed_(seed) {}
  Provider provider() const override { return Provider::kSurrogate; }
  std::string tag() const override;
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  std::size_t calls() const { return calls_; }

 private:
  std::uint64_t seed_;
  std::size_t calls_ = 0;
};

struct RemoteConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "text-embedding-3-large";
  std::string api_key_env = "OPENAI_API_KEY";
  std::size_t batch_size = 256;
  std::size_t max_concurrency = 4;
  int max_retries = 5;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::seconds timeout{60};
  std::size_t expected_dim = kEmbeddingDim;
};

// Client for an OpenAI-compatible POST {base_url}/embeddings endpoint.
// Batches are sent with bounded concurrency; 429, 5xx and connection
// failures are retried with exponential backoff. A vector of the wrong
// length is a ProtocolError and is never retried.
class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(RemoteConfig config);
  Provider provider() const override { return Provider::kRemote; }
  std::string tag() const override;
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;

  // HTTP requests sent so far, retries included.
  std::size_t requests_issued() const { return requests_.load(); }
  const RemoteConfig& config() const { return config_; }

 private:
  std::vector<std::vector<float>> embed_batch(std::span<const std::string> batch,
                                              const std::string& api_key);

  RemoteConfig config_;
  std::atomic<std::size_t> requests_{0};
};

// Persistent content-addressed store. Keys are SHA-256 of the embedder tag
// and the normalized text. Concurrent readers, exclusive writers; every
// store is appended to the backing file immediately.
class EmbeddingCache {
 public:
  // Creates the file if missing. A corrupt file throws FormatError unless
  // rebuild is set, in which case it is truncated.
  explicit EmbeddingCache(std::filesystem::path path, bool rebuild = false,
                          std::uint32_t dim = static_cast<std::uint32_t>(kEmbeddingDim));

  static Digest key_for(std::string_view embedder_tag, std::string_view text);

  std::optional<std::vector<float>> lookup(const Digest& key) const;
  void store(const Digest& key, std::span<const float> values);
  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::uint32_t dim_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<Digest, std::vector<float>, DigestHash> entries_;
  std::ofstream out_;
};

struct LookupResult {
  std::vector<EmbeddingVector> vectors;
  std::size_t hits = 0;
  std::size_t misses = 0;
};

// Serves hits from the cache, embeds the distinct misses in one call, stores
// them, and returns vectors in input order.
LookupResult lookup_or_embed(std::span<const std::string> texts, Embedder& embedder,
                             EmbeddingCache& cache);

// Throws PreconditionError unless the vector has kEmbeddingDim finite values.
void check_embedding(std::span<const float> values);

}  // namespace clickbait
