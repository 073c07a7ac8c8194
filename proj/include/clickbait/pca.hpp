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
#include <cstdint>
#include <filesystem>
#include <string>

namespace clickbait {

// Projection onto the top principal directions of centered training data.
struct PcaModel {
  Eigen::VectorXd mean;                      // input_dim
  Eigen::MatrixXd components;                // d_out x input_dim, orthonormal rows
  Eigen::VectorXd explained_variance;        // d_out, sample variance along each row
  Eigen::VectorXd explained_variance_ratio;  // d_out, non-increasing, sums to <= 1

  Eigen::Index input_dim() const { return mean.size(); }
  Eigen::Index output_dim() const { return components.rows(); }
};

// Rows of X are samples. Requires n >= 2 and d_out <= min(n - 1, dim).
// Components are the leading right singular vectors of the centered matrix;
// each is flipped so that its largest-magnitude entry is positive.
PcaModel pca_fit(const Eigen::MatrixXd& X, Eigen::Index d_out);

// (X - mean) * components^T
Eigen::MatrixXd pca_transform(const PcaModel& model, const Eigen::MatrixXd& X);
Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& Z);

void save_pca(const std::filesystem::path& path, const PcaModel& model);
PcaModel load_pca(const std::filesystem::path& path);

struct MemoryFootprint {
  std::uint64_t bytes = 0;
  double decimal_mb = 0.0;  // bytes / 10^6
  double binary_mib = 0.0;  // bytes / 2^20
  std::string describe() const;  // e.g. "160000000 bytes (160.0 MB, 152.6 MiB)"
};

MemoryFootprint memory_footprint(std::uint64_t rows, std::uint64_t dim, std::uint64_t bytes_per_value);

}  // namespace clickbait
