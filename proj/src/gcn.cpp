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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "adam.hpp"
#include "clickbait/error.hpp"
#include "clickbait/models.hpp"

namespace clickbait {

GcnModel GcnModel::zeros(Eigen::Index input_dim, Eigen::Index hidden) {
  GcnModel m;
  m.W1 = Eigen::MatrixXd::Zero(input_dim, hidden);
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.W2 = Eigen::MatrixXd::Zero(hidden, 1);
  return m;
}

GcnModel GcnModel::glorot(Eigen::Index input_dim, Eigen::Index hidden, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GcnModel m = zeros(input_dim, hidden);
  m.W1 = detail::glorot_uniform(input_dim, hidden, rng);
  m.W2 = detail::glorot_uniform(hidden, 1, rng);
  return m;
}

namespace {

void check_shapes(const GcnModel& model, const SparseMatrixD& a_hat, const Eigen::MatrixXd& X) {
  if (a_hat.rows() != X.rows() || a_hat.cols() != X.rows()) {
    throw PreconditionError("GCN: adjacency is " + std::to_string(a_hat.rows()) + " nodes but X has " +
                            std::to_string(X.rows()) + " rows");
  }
  if (X.cols() != model.W1.rows()) {
    throw PreconditionError("GCN: model expects " + std::to_string(model.W1.rows()) + " features, got " +
                            std::to_string(X.cols()));
  }
}

struct GcnActivations {
  Eigen::MatrixXd pre;     // Â X W1 + b1
  Eigen::MatrixXd hidden;  // relu(pre)
  Eigen::VectorXd logits;
};

GcnActivations run(const GcnModel& model, const SparseMatrixD& a_hat, const Eigen::MatrixXd& X) {
  GcnActivations act;
  const Eigen::MatrixXd xw = X * model.W1;
  act.pre = a_hat * xw;
  act.pre.rowwise() += model.b1.transpose();
  act.hidden = act.pre.cwiseMax(0.0);
  const Eigen::VectorXd hw = act.hidden * model.W2.col(0);
  act.logits = a_hat * hw;
  act.logits.array() += model.b2;
  return act;
}

}  // namespace

Eigen::VectorXd gcn_logits(const GcnModel& model, const SparseMatrixD& a_hat, const Eigen::MatrixXd& X) {
  check_shapes(model, a_hat, X);
  return run(model, a_hat, X).logits;
}

Eigen::VectorXd gcn_forward(const GcnModel& model, const SparseMatrixD& a_hat, const Eigen::MatrixXd& X) {
  return gcn_logits(model, a_hat, X).unaryExpr([](double z) { return probability(z); });
}

double gcn_loss_and_gradient(const GcnModel& model, const SparseMatrixD& a_hat, const Eigen::MatrixXd& X,
                             std::span<const int> labels, std::span<const std::size_t> mask,
                             GcnGradient* grad) {
  check_shapes(model, a_hat, X);
  if (mask.empty()) throw PreconditionError("GCN: empty training mask");
  const auto act = run(model, a_hat, X);
  Eigen::VectorXd dz;
  const double loss = detail::masked_logistic_loss(act.logits, labels, mask, grad ? &dz : nullptr);
  if (!grad) return loss;

  const Eigen::VectorXd d_hw = a_hat.transpose() * dz;
  grad->b2 = dz.sum();
  grad->W2 = act.hidden.transpose() * d_hw;
  Eigen::MatrixXd d_pre = d_hw * model.W2.col(0).transpose();
  d_pre.array() *= (act.pre.array() > 0.0).cast<double>();
  grad->b1 = d_pre.colwise().sum().transpose();
  const Eigen::MatrixXd d_xw = a_hat.transpose() * d_pre;
  grad->W1 = X.transpose() * d_xw;
  return loss;
}

namespace {

void check_mask(std::span<const int> labels, std::span<const std::size_t> mask, std::size_t n) {
  if (mask.empty()) throw PreconditionError("training mask is empty");
  if (labels.size() != n) throw PreconditionError("labels and node count disagree");
  bool pos = false;
  bool neg = false;
  for (const auto i : mask) {
    if (i >= n) throw PreconditionError("training mask index out of range");
    (labels[i] == 1 ? pos : neg) = true;
  }
  if (!pos || !neg) throw PreconditionError("training mask must select at least one node per class");
}

[[noreturn]] void diverged(const char* what, int epoch, const std::vector<double>& history) {
  std::ostringstream msg;
  msg << what << " training diverged at epoch " << epoch << " (last finite loss "
      << (history.empty() ? NAN : history.back()) << ")";
  throw DivergenceError(msg.str());
}

}  // namespace

GcnModel train_gcn(const SparseMatrixD& a_hat, const Eigen::MatrixXd& X, std::span<const int> labels,
                   std::span<const std::size_t> train_mask, const TrainConfig& cfg) {
  cfg.validate();
  check_mask(labels, train_mask, static_cast<std::size_t>(X.rows()));
  GcnModel model = GcnModel::glorot(X.cols(), cfg.hidden_dim, cfg.seed);
  check_shapes(model, a_hat, X);

  detail::Adam adam(cfg.learning_rate);
  detail::Adam::Moments<Eigen::MatrixXd> mw1(model.W1);
  detail::Adam::Moments<Eigen::VectorXd> mb1(model.b1);
  detail::Adam::Moments<Eigen::MatrixXd> mw2(model.W2);
  detail::Adam::ScalarMoments mb2;
  GcnGradient grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double loss = gcn_loss_and_gradient(model, a_hat, X, labels, train_mask, &grad);
    if (!std::isfinite(loss)) diverged("GCN", epoch, model.loss_history);
    model.loss_history.push_back(loss);
    adam.next_step();
    adam.update(model.W1, grad.W1, mw1);
    adam.update(model.b1, grad.b1, mb1);
    adam.update(model.W2, grad.W2, mw2);
    adam.update(model.b2, grad.b2, mb2);
  }
  if (!model.W1.allFinite() || !model.W2.allFinite()) diverged("GCN", cfg.epochs, model.loss_history);
  return model;
}

}  // namespace clickbait
