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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "clickbait/corpus.hpp"
#include "clickbait/heuristics.hpp"

namespace clickbait {

using RowMatrixF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// [e_reduced | b | i] by default; EXPANDED swaps the two scores for the six
// bait and four info sub-signals.
enum class FeatureMode { kAggregate, kExpanded };

using HybridFeature = std::vector<float>;

std::size_t hybrid_dim(std::size_t reduced_dim, FeatureMode mode);

HybridFeature assemble(std::span<const float> e_reduced, const HeuristicScores& scores,
                       FeatureMode mode = FeatureMode::kAggregate);

struct FeatureMatrix {
  RowMatrixF values;
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::vector<Split> splits;

  std::size_t rows() const { return labels.size(); }
  Eigen::Index dim() const { return values.cols(); }
  std::vector<std::size_t> rows_in(Split split) const;
  // Throws unless values, labels, ids and splits agree in length.
  void validate() const;
};

// Rows of `reduced` align with `records`.
FeatureMatrix build_feature_matrix(const RowMatrixF& reduced, const std::vector<HeadlineRecord>& records,
                                   const HeuristicConfig& config, FeatureMode mode = FeatureMode::kAggregate);

// Per-column shift and scale for the embedding block; trailing heuristic
// columns pass through untouched.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;

  void apply(std::span<float> row) const;
  bool empty() const { return mean.empty(); }
};

// Z-scores the embedding block (all but the trailing heuristic columns) with
// statistics of the training rows (all rows when none are tagged train) and
// returns those statistics. Off by default in the pipeline.
Standardization standardize_embedding_block(FeatureMatrix& features, std::size_t heuristic_columns);

FeatureMatrix select_rows(const FeatureMatrix& features, const std::vector<std::size_t>& rows);

void save_features(const std::filesystem::path& path, const FeatureMatrix& features);
FeatureMatrix load_features(const std::filesystem::path& path);

}  // namespace clickbait
