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

#include "clickbait/features.hpp"

#include <algorithm>
#include <cmath>

#include "clickbait/error.hpp"
#include "clickbait/matrix_io.hpp"

namespace clickbait {

std::size_t hybrid_dim(std::size_t reduced_dim, FeatureMode mode) {
  return reduced_dim + (mode == FeatureMode::kAggregate ? 2 : 10);
}

HybridFeature assemble(std::span<const float> e_reduced, const HeuristicScores& scores,
                       FeatureMode mode) {
  for (const float v : e_reduced) {
    if (!std::isfinite(v)) throw PreconditionError("reduced embedding has non-finite entries");
  }
  HybridFeature x(e_reduced.begin(), e_reduced.end());
  x.reserve(hybrid_dim(e_reduced.size(), mode));
  if (mode == FeatureMode::kAggregate) {
    x.push_back(static_cast<float>(scores.baitness));
    x.push_back(static_cast<float>(scores.informativeness));
  } else {
    for (const double v : scores.bait_signals.as_array()) x.push_back(static_cast<float>(v));
    for (const double v : scores.info_signals.as_array()) x.push_back(static_cast<float>(v));
  }
  return x;
}

std::vector<std::size_t> FeatureMatrix::rows_in(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (splits[i] == split) out.push_back(i);
  }
  return out;
}

void FeatureMatrix::validate() const {
  const auto n = static_cast<std::size_t>(values.rows());
  if (labels.size() != n || ids.size() != n || splits.size() != n) {
    throw PreconditionError("feature matrix rows, labels, ids and splits disagree in length");
  }
}

FeatureMatrix build_feature_matrix(const RowMatrixF& reduced, const std::vector<HeadlineRecord>& records,
                                   const HeuristicConfig& config, FeatureMode mode) {
  if (static_cast<std::size_t>(reduced.rows()) != records.size()) {
    throw PreconditionError("reduced embeddings and records disagree in length");
  }
  FeatureMatrix out;
  const auto dim = hybrid_dim(static_cast<std::size_t>(reduced.cols()), mode);
  out.values.resize(reduced.rows(), static_cast<Eigen::Index>(dim));
  for (Eigen::Index r = 0; r < reduced.rows(); ++r) {
    const auto& rec = records[static_cast<std::size_t>(r)];
    const auto x = assemble(std::span(reduced.row(r).data(), static_cast<std::size_t>(reduced.cols())),
                            score_headline(rec.text, config), mode);
    out.values.row(r) = Eigen::Map<const Eigen::RowVectorXf>(x.data(), static_cast<Eigen::Index>(x.size()));
    out.labels.push_back(rec.label);
    out.ids.push_back(rec.id);
    out.splits.push_back(rec.split);
  }
  return out;
}

void Standardization::apply(std::span<float> row) const {
  if (row.size() < mean.size()) throw PreconditionError("row shorter than the standardized block");
  for (std::size_t c = 0; c < mean.size(); ++c) {
    row[c] = static_cast<float>((static_cast<double>(row[c]) - mean[c]) * scale[c]);
  }
}

Standardization standardize_embedding_block(FeatureMatrix& features, std::size_t heuristic_columns) {
  if (static_cast<Eigen::Index>(heuristic_columns) > features.dim()) {
    throw PreconditionError("more heuristic columns than feature columns");
  }
  auto train = features.rows_in(Split::kTrain);
  if (train.empty()) {
    train.resize(features.rows());
    for (std::size_t i = 0; i < train.size(); ++i) train[i] = i;
  }
  if (train.empty()) throw PreconditionError("cannot standardize an empty feature matrix");
  const auto block = features.dim() - static_cast<Eigen::Index>(heuristic_columns);
  Standardization stats;
  for (Eigen::Index c = 0; c < block; ++c) {
    double sum = 0.0;
    double sq = 0.0;
    for (const auto r : train) {
      const double v = features.values(static_cast<Eigen::Index>(r), c);
      sum += v;
      sq += v * v;
    }
    const double n = static_cast<double>(train.size());
    const double mean = sum / n;
    const double sd = std::sqrt(std::max(sq / n - mean * mean, 0.0));
    stats.mean.push_back(mean);
    stats.scale.push_back(sd > 0.0 ? 1.0 / sd : 1.0);
  }
  for (Eigen::Index r = 0; r < features.values.rows(); ++r) {
    stats.apply(std::span(features.values.row(r).data(), static_cast<std::size_t>(features.dim())));
  }
  return stats;
}

FeatureMatrix select_rows(const FeatureMatrix& features, const std::vector<std::size_t>& rows) {
  FeatureMatrix out;
  out.values.resize(static_cast<Eigen::Index>(rows.size()), features.dim());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.values.row(static_cast<Eigen::Index>(k)) = features.values.row(static_cast<Eigen::Index>(rows[k]));
    out.labels.push_back(features.labels[rows[k]]);
    out.ids.push_back(features.ids[rows[k]]);
    out.splits.push_back(features.splits[rows[k]]);
  }
  return out;
}

void save_features(const std::filesystem::path& path, const FeatureMatrix& features) {
  features.validate();
  KeyedRows rows;
  rows.dim = static_cast<std::uint32_t>(features.dim());
  rows.values.assign(features.values.data(), features.values.data() + features.values.size());
  std::vector<IndexEntry> index;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    rows.keys.push_back(row_key(features.ids[i]));
    index.push_back({features.ids[i], features.labels[i], features.splits[i]});
  }
  write_keyed_rows(path, kMatrixMagic, rows);
  write_index(index_path(path), index);
}

FeatureMatrix load_features(const std::filesystem::path& path) {
  const auto rows = read_keyed_rows(path, kMatrixMagic);
  const auto index = read_index(index_path(path));
  if (index.size() != rows.rows()) throw FormatError(path.string() + ": index and matrix disagree");
  FeatureMatrix out;
  out.values = Eigen::Map<const RowMatrixF>(rows.values.data(), static_cast<Eigen::Index>(rows.rows()),
                                            static_cast<Eigen::Index>(rows.dim));
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (row_key(index[i].id) != rows.keys[i]) {
      throw FormatError(path.string() + ": row " + std::to_string(i) + " key does not match index id");
    }
    out.labels.push_back(index[i].label);
    out.ids.push_back(index[i].id);
    out.splits.push_back(index[i].split);
  }
  return out;
}

}  // namespace clickbait
