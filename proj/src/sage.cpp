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
#include <random>
#include <sstream>

#include "adam.hpp"
#include "clickbait/error.hpp"
#include "clickbait/models.hpp"

namespace clickbait {

SageModel SageModel::zeros(Eigen::Index input_dim, Eigen::Index hidden) {
  SageModel m;
  m.Ws1 = Eigen::MatrixXd::Zero(input_dim, hidden);
  m.Wn1 = Eigen::MatrixXd::Zero(input_dim, hidden);
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.ws2 = Eigen::VectorXd::Zero(hidden);
  m.wn2 = Eigen::VectorXd::Zero(hidden);
  return m;
}

SageModel SageModel::glorot(Eigen::Index input_dim, Eigen::Index hidden, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SageModel m = zeros(input_dim, hidden);
  m.Ws1 = detail::glorot_uniform(input_dim, hidden, rng);
  m.Wn1 = detail::glorot_uniform(input_dim, hidden, rng);
  m.ws2 = detail::glorot_uniform(hidden, 1, rng).col(0);
  m.wn2 = detail::glorot_uniform(hidden, 1, rng).col(0);
  return m;
}

namespace {

void check_shapes(const SageModel& model, const SparseMatrixD& mean_op, const Eigen::MatrixXd& X) {
  if (mean_op.rows() != X.rows() || mean_op.cols() != X.rows()) {
    throw PreconditionError("GraphSAGE: graph has " + std::to_string(mean_op.rows()) + " nodes but X has " +
                            std::to_string(X.rows()) + " rows");
  }
  if (X.cols() != model.Ws1.rows()) {
    throw PreconditionError("GraphSAGE: model expects " + std::to_string(model.Ws1.rows()) +
                            " features, got " + std::to_string(X.cols()));
  }
}

struct SageActivations {
  Eigen::MatrixXd pre;
  Eigen::MatrixXd hidden;
  Eigen::VectorXd logits;
};

SageActivations run(const SageModel& model, const SparseMatrixD& mean_op, const Eigen::MatrixXd& X) {
  SageActivations act;
  // mean(x_u) Wn1 == mean(x_u Wn1); aggregating after the projection is cheaper.
  const Eigen::MatrixXd neigh = X * model.Wn1;
  act.pre = X * model.Ws1;
  act.pre.noalias() += mean_op * neigh;
  act.pre.rowwise() += model.b1.transpose();
  act.hidden = act.pre.cwiseMax(0.0);
  const Eigen::VectorXd hn = act.hidden * model.wn2;
  act.logits = act.hidden * model.ws2;
  act.logits.noalias() += mean_op * hn;
  act.logits.array() += model.b2;
  return act;
}

}  // namespace

Eigen::VectorXd sage_logits(const SageModel& model, const SparseMatrixD& mean_op, const Eigen::MatrixXd& X) {
  check_shapes(model, mean_op, X);
  return run(model, mean_op, X).logits;
}

Eigen::VectorXd sage_forward(const SageModel& model, const SparseMatrixD& mean_op, const Eigen::MatrixXd& X,
                             std::span<const std::size_t> targets) {
  const Eigen::VectorXd z = sage_logits(model, mean_op, X);
  Eigen::VectorXd out(static_cast<Eigen::Index>(targets.size()));
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] >= static_cast<std::size_t>(z.size())) {
      throw PreconditionError("GraphSAGE: target node " + std::to_string(targets[t]) + " does not exist");
    }
    out(static_cast<Eigen::Index>(t)) = probability(z(static_cast<Eigen::Index>(targets[t])));
  }
  return out;
}

Eigen::VectorXd sage_forward(const SageModel& model, const KnnGraph& g, const Eigen::MatrixXd& X,
                             std::span<const std::size_t> targets) {
  return sage_forward(model, mean_aggregation(g), X, targets);
}

double sage_loss_and_gradient(const SageModel& model, const SparseMatrixD& mean_op, const Eigen::MatrixXd& X,
                              std::span<const int> labels, std::span<const std::size_t> mask,
                              SageGradient* grad) {
  check_shapes(model, mean_op, X);
  if (mask.empty()) throw PreconditionError("GraphSAGE: empty training mask");
  const auto act = run(model, mean_op, X);
  Eigen::VectorXd dz;
  const double loss = detail::masked_logistic_loss(act.logits, labels, mask, grad ? &dz : nullptr);
  if (!grad) return loss;

  const Eigen::VectorXd d_hn = mean_op.transpose() * dz;
  grad->b2 = dz.sum();
  grad->ws2 = act.hidden.transpose() * dz;
  grad->wn2 = act.hidden.transpose() * d_hn;
  Eigen::MatrixXd d_pre = dz * model.ws2.transpose();
  d_pre.noalias() += d_hn * model.wn2.transpose();
  d_pre.array() *= (act.pre.array() > 0.0).cast<double>();
  grad->b1 = d_pre.colwise().sum().transpose();
  grad->Ws1 = X.transpose() * d_pre;
  const Eigen::MatrixXd d_neigh = mean_op.transpose() * d_pre;
  grad->Wn1 = X.transpose() * d_neigh;
  return loss;
}

SageModel train_sage(const KnnGraph& g, const Eigen::MatrixXd& X, std::span<const int> labels,
                     std::span<const std::size_t> train_mask, const TrainConfig& cfg) {
  cfg.validate();
  if (train_mask.empty()) throw PreconditionError("training mask is empty");
  if (labels.size() != static_cast<std::size_t>(X.rows())) {
    throw PreconditionError("labels and node count disagree");
  }
  bool pos = false;
  bool neg = false;
  for (const auto i : train_mask) {
    if (i >= labels.size()) throw PreconditionError("training mask index out of range");
    (labels[i] == 1 ? pos : neg) = true;
  }
  if (!pos || !neg) throw PreconditionError("training mask must select at least one node per class");

  const SparseMatrixD mean_op = mean_aggregation(g);
  SageModel model = SageModel::glorot(X.cols(), cfg.hidden_dim, cfg.seed);
  check_shapes(model, mean_op, X);

  detail::Adam adam(cfg.learning_rate);
  detail::Adam::Moments<Eigen::MatrixXd> m_ws1(model.Ws1);
  detail::Adam::Moments<Eigen::MatrixXd> m_wn1(model.Wn1);
  detail::Adam::Moments<Eigen::VectorXd> m_b1(model.b1);
  detail::Adam::Moments<Eigen::VectorXd> m_ws2(model.ws2);
  detail::Adam::Moments<Eigen::VectorXd> m_wn2(model.wn2);
  detail::Adam::ScalarMoments m_b2;
  SageGradient grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double loss = sage_loss_and_gradient(model, mean_op, X, labels, train_mask, &grad);
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "GraphSAGE training diverged at epoch " << epoch << " (last finite loss "
          << (model.loss_history.empty() ? NAN : model.loss_history.back()) << ")";
      throw DivergenceError(msg.str());
    }
    model.loss_history.push_back(loss);
    adam.next_step();
    adam.update(model.Ws1, grad.Ws1, m_ws1);
    adam.update(model.Wn1, grad.Wn1, m_wn1);
    adam.update(model.b1, grad.b1, m_b1);
    adam.update(model.ws2, grad.ws2, m_ws2);
    adam.update(model.wn2, grad.wn2, m_wn2);
    adam.update(model.b2, grad.b2, m_b2);
  }
  return model;
}

}  // namespace clickbait
