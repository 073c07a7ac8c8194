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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "clickbait/features.hpp"
#include "clickbait/graph.hpp"

namespace clickbait {

struct GbdtParams {
  int rounds = 200;
  int max_depth = 4;
  double learning_rate = 0.1;
  double min_child_weight = 1.0;
  double lambda = 1.0;
};

struct TrainConfig {
  std::uint64_t seed = 42;
  int epochs = 50;
  double learning_rate = 0.01;
  int hidden_dim = 64;
  GbdtParams gbdt;

  void validate() const;
  std::string to_json() const;
  static TrainConfig from_json(std::string_view text);
};

// Logistic sigmoid, kept strictly inside (0,1) in double precision.
double probability(double logit);

// ---------------------------------------------------------------- GBDT

// A split node sends x to `left` when x[feature] < threshold. Leaves have
// feature == -1.
struct TreeNode {
  int feature = -1;
  float threshold = 0.0f;
  int left = -1;
  int right = -1;
  float leaf = 0.0f;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  float leaf_value(std::span<const float> x) const;
  int depth() const;
};

struct GbdtModel {
  std::vector<RegressionTree> trees;
  double learning_rate = 0.1;
  double base_score = 0.0;  // log-odds
  std::size_t n_features = 0;
  std::vector<double> loss_history;  // training loss after each round; [0] is the prior

  double margin(std::span<const float> x) const;
};

// Second-order boosting on the logistic loss with exact greedy split search.
// A round whose tree would raise the training loss has its leaves halved
// until it does not, so the recorded history is non-increasing.
GbdtModel train_gbdt(const RowMatrixF& X, std::span<const int> labels, const TrainConfig& cfg);
double gbdt_predict(const GbdtModel& model, std::span<const float> x);
Eigen::VectorXd gbdt_predict(const GbdtModel& model, const RowMatrixF& X);

// ----------------------------------------------------------------- GCN

// p = sigmoid(Â · relu(Â X W1 + b1) · W2 + b2)
struct GcnModel {
  Eigen::MatrixXd W1;  // input_dim x hidden
  Eigen::VectorXd b1;  // hidden
  Eigen::MatrixXd W2;  // hidden x 1
  double b2 = 0.0;
  std::vector<double> loss_history;

  static GcnModel zeros(Eigen::Index input_dim, Eigen::Index hidden);
  static GcnModel glorot(Eigen::Index input_dim, Eigen::Index hidden, std::uint64_t seed);
};

struct GcnGradient {
  Eigen::MatrixXd W1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd W2;
  double b2 = 0.0;
};

Eigen::VectorXd gcn_logits(const GcnModel& model, const SparseMatrixD& a_hat, const Eigen::MatrixXd& X);
Eigen::VectorXd gcn_forward(const GcnModel& model, const SparseMatrixD& a_hat, const Eigen::MatrixXd& X);

// Mean binary cross-entropy over `mask` nodes and its analytic gradient.
double gcn_loss_and_gradient(const GcnModel& model, const SparseMatrixD& a_hat, const Eigen::MatrixXd& X,
                             std::span<const int> labels, std::span<const std::size_t> mask,
                             GcnGradient* grad);

GcnModel train_gcn(const SparseMatrixD& a_hat, const Eigen::MatrixXd& X, std::span<const int> labels,
                   std::span<const std::size_t> train_mask, const TrainConfig& cfg);

// ----------------------------------------------------------- GraphSAGE

// h_v = relu(x_v Ws1 + mean_{u in N(v)} x_u Wn1 + b1)
// z_v = h_v ws2 + mean_{u in N(v)} h_u wn2 + b2
struct SageModel {
  Eigen::MatrixXd Ws1;  // input_dim x hidden
  Eigen::MatrixXd Wn1;  // input_dim x hidden
  Eigen::VectorXd b1;
  Eigen::VectorXd ws2;  // hidden
  Eigen::VectorXd wn2;  // hidden
  double b2 = 0.0;
  std::vector<double> loss_history;

  static SageModel zeros(Eigen::Index input_dim, Eigen::Index hidden);
  static SageModel glorot(Eigen::Index input_dim, Eigen::Index hidden, std::uint64_t seed);
};

struct SageGradient {
  Eigen::MatrixXd Ws1;
  Eigen::MatrixXd Wn1;
  Eigen::VectorXd b1;
  Eigen::VectorXd ws2;
  Eigen::VectorXd wn2;
  double b2 = 0.0;
};

// Full-neighborhood logits for every node; `mean_op` is mean_aggregation(g).
Eigen::VectorXd sage_logits(const SageModel& model, const SparseMatrixD& mean_op, const Eigen::MatrixXd& X);
// Probabilities of the `targets` nodes.
Eigen::VectorXd sage_forward(const SageModel& model, const KnnGraph& g, const Eigen::MatrixXd& X,
                             std::span<const std::size_t> targets);
// Same, with a precomputed mean operator.
Eigen::VectorXd sage_forward(const SageModel& model, const SparseMatrixD& mean_op, const Eigen::MatrixXd& X,
                             std::span<const std::size_t> targets);

double sage_loss_and_gradient(const SageModel& model, const SparseMatrixD& mean_op, const Eigen::MatrixXd& X,
                              std::span<const int> labels, std::span<const std::size_t> mask,
                              SageGradient* grad);

SageModel train_sage(const KnnGraph& g, const Eigen::MatrixXd& X, std::span<const int> labels,
                     std::span<const std::size_t> train_mask, const TrainConfig& cfg);

// ----------------------------------------------------------- artifacts

enum class ModelKind : std::uint32_t { kGbdt = 0, kGcn = 1, kSage = 2 };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

using AnyModel = std::variant<GbdtModel, GcnModel, SageModel>;

ModelKind kind_of(const AnyModel& model);

struct ModelArtifact {
  AnyModel model;
  std::string config_echo;  // JSON document stored in the header
};

// Header {magic "CBMD", version, kind, input_dim, hidden, echo length, echo
// JSON} followed by little-endian float32 weights; GBDT trees are stored as
// a flat node table.
void save_model(const std::filesystem::path& path, const AnyModel& model, const std::string& config_echo);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace clickbait
