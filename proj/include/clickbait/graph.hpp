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

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "clickbait/features.hpp"

namespace clickbait {

struct Neighbor {
  std::size_t node = 0;
  double weight = 0.0;  // cosine similarity
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Undirected similarity graph. Neighbor lists are sorted by node index and
// never contain the node itself.
class KnnGraph {
 public:
  KnnGraph() = default;
  KnnGraph(std::size_t k, std::vector<std::vector<Neighbor>> adjacency);

  std::size_t size() const { return adjacency_.size(); }
  std::size_t k() const { return k_; }
  const std::vector<Neighbor>& neighbors(std::size_t node) const { return adjacency_[node]; }
  std::size_t degree(std::size_t node) const { return adjacency_[node].size(); }
  std::size_t edge_count() const;

  friend bool operator==(const KnnGraph&, const KnnGraph&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::vector<Neighbor>> adjacency_;
};

using SparseMatrixD = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// For every row, the k most cosine-similar other rows (ties to the lower
// index), then union-symmetrized. Requires 1 <= k < n and no zero rows.
// `threads` = 0 uses the hardware concurrency; results do not depend on it.
KnnGraph build_knn_graph(const RowMatrixF& X, std::size_t k, unsigned threads = 0);
KnnGraph build_knn_graph(const FeatureMatrix& features, std::size_t k, unsigned threads = 0);

// Indices of the k rows of `reference` most cosine-similar to `query`.
std::vector<std::size_t> nearest_rows(const RowMatrixF& reference, std::span<const float> query,
                                      std::size_t k);

// Appends one node per row of `extra`, linked to its k nearest neighbors
// among the original nodes of `g` (rows of `base`). Used for inductive
// prediction on headlines that were not part of the graph.
KnnGraph attach_nodes(const KnnGraph& g, const RowMatrixF& base, const RowMatrixF& extra);

// D^{-1/2} (A + I) D^{-1/2} with A the binarized adjacency.
SparseMatrixD normalize_adjacency(const KnnGraph& g);

// Row-stochastic neighbor mean operator: entry 1/deg(u) for each neighbor,
// all-zero rows for isolated nodes.
SparseMatrixD mean_aggregation(const KnnGraph& g);

// JSON-lines: header {"n","k","metric"} then {"node","neighbors","weights"}.
void save_graph(const std::filesystem::path& path, const KnnGraph& g);
KnnGraph load_graph(const std::filesystem::path& path);

}  // namespace clickbait
