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

#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "clickbait/embeddings.hpp"
#include "clickbait/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace clickbait {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw PreconditionError("base URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.origin = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

// Failure that may go away on retry.
struct TransientFailure {
  std::string reason;
};

}  // namespace

RemoteEmbedder::RemoteEmbedder(RemoteConfig config) : config_(std::move(config)) {
  if (config_.batch_size == 0 || config_.max_concurrency == 0) {
    throw PreconditionError("batch size and concurrency must be positive");
  }
  parse_url(config_.base_url);
}

std::string RemoteEmbedder::tag() const { return "remote:" + config_.model; }

std::vector<std::vector<float>> RemoteEmbedder::embed_batch(std::span<const std::string> batch,
                                                            const std::string& api_key) {
  const auto url = parse_url(config_.base_url);
  httplib::Client client(url.origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);

  nlohmann::json body = {{"model", config_.model}, {"input", nlohmann::json::array()}};
  for (const auto& t : batch) body["input"].push_back(t);
  const httplib::Headers headers = {{"Authorization", "Bearer " + api_key}};

  auto backoff = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    ++requests_;
    std::string failure;
    auto res = client.Post(url.path + "/embeddings", headers, body.dump(), "application/json");
    if (!res) {
      failure = "connection error: " + httplib::to_string(res.error());
    } else if (res->status == 429 || res->status >= 500) {
      failure = "HTTP " + std::to_string(res->status);
    } else if (res->status < 200 || res->status >= 300) {
      throw ServiceError("embedding service rejected request with HTTP " +
                         std::to_string(res->status) + ": " + res->body.substr(0, 200));
    } else {
      nlohmann::json reply;
      try {
        reply = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("embedding reply is not JSON: ") + e.what());
      }
      const auto data = reply.find("data");
      if (data == reply.end() || !data->is_array() || data->size() != batch.size()) {
        throw ProtocolError("embedding reply must hold one item per input");
      }
      std::vector<std::vector<float>> out(batch.size());
      for (std::size_t k = 0; k < data->size(); ++k) {
        const auto& item = (*data)[k];
        const auto index = item.value("index", k);
        if (index >= batch.size() || !out[index].empty()) {
          throw ProtocolError("embedding reply has a bad or repeated index");
        }
        const auto& emb = item.at("embedding");
        if (!emb.is_array() || emb.size() != config_.expected_dim) {
          throw ProtocolError("embedding service returned a vector of length " +
                              std::to_string(emb.is_array() ? emb.size() : 0) + ", expected " +
                              std::to_string(config_.expected_dim));
        }
        out[index].reserve(emb.size());
        for (const auto& v : emb) {
          const auto f = static_cast<float>(v.get<double>());
          if (!std::isfinite(f)) throw ProtocolError("embedding contains a non-finite value");
          out[index].push_back(f);
        }
      }
      return out;
    }
    if (attempt >= config_.max_retries) throw TransientFailure{failure};
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

std::vector<EmbeddingVector> RemoteEmbedder::embed(std::span<const std::string> texts) {
  if (texts.empty()) return {};
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw PreconditionError("embedding credential missing: set " + config_.api_key_env);
  }
  const std::string api_key(key);

  const std::size_t n_batches = (texts.size() + config_.batch_size - 1) / config_.batch_size;
  std::vector<EmbeddingVector> out(texts.size());
  std::atomic<std::size_t> next{0};
  std::mutex failures_mutex;
  std::vector<std::size_t> failed_batches;
  std::string last_failure;
  std::exception_ptr fatal;

  auto worker = [&] {
    for (std::size_t b = next++; b < n_batches; b = next++) {
      {
        std::lock_guard lock(failures_mutex);
        if (fatal) return;
      }
      const auto begin = b * config_.batch_size;
      const auto count = std::min(config_.batch_size, texts.size() - begin);
      try {
        auto vectors = embed_batch(texts.subspan(begin, count), api_key);
        for (std::size_t k = 0; k < count; ++k) {
          out[begin + k] = {std::move(vectors[k]), Provider::kRemote};
        }
      } catch (const TransientFailure& f) {
        std::lock_guard lock(failures_mutex);
        failed_batches.push_back(b);
        last_failure = f.reason;
      } catch (...) {
        std::lock_guard lock(failures_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };

  const auto n_workers = std::min(config_.max_concurrency, n_batches);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (fatal) std::rethrow_exception(fatal);
  if (!failed_batches.empty()) {
    std::sort(failed_batches.begin(), failed_batches.end());
    std::string list;
    for (const auto b : failed_batches) list += (list.empty() ? "" : ",") + std::to_string(b);
    throw ServiceError("embedding batches [" + list + "] failed after " +
                       std::to_string(config_.max_retries) + " retries (" + last_failure + ")");
  }
  return out;
}

}  // namespace clickbait
