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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "clickbait/error.hpp"
#include "clickbait/models.hpp"
#include "oracles.hpp"

using namespace clickbait;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// 0-1, 1-2, 2-3, 0-2
KnnGraph four_node_graph() {
  return KnnGraph(1, {{{1, 1.0}, {2, 1.0}}, {{0, 1.0}, {2, 1.0}}, {{0, 1.0}, {1, 1.0}, {3, 1.0}}, {{2, 1.0}}});
}

Eigen::MatrixXd random_features(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = dist(rng);
  }
  return X;
}

void randomize_biases(std::mt19937_64& rng, Eigen::VectorXd& b1, double& b2) {
  std::normal_distribution<double> dist(0.0, 0.3);
  for (Eigen::Index i = 0; i < b1.size(); ++i) b1(i) = dist(rng);
  b2 = dist(rng);
}

// Two 5-cliques with opposite labels and a cluster-indicator feature.
struct TwoCliques {
  KnnGraph graph;
  Eigen::MatrixXd X;
  std::vector<int> labels;
  std::vector<std::size_t> mask;
};

TwoCliques two_cliques() {
  std::vector<std::vector<Neighbor>> adj(10);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t u = 5 * c; u < 5 * c + 5; ++u) {
      for (std::size_t v = 5 * c; v < 5 * c + 5; ++v) {
        if (u != v) adj[u].push_back({v, 1.0});
      }
    }
  }
  TwoCliques t{KnnGraph(4, adj), Eigen::MatrixXd::Zero(10, 2), {}, {}};
  for (std::size_t u = 0; u < 10; ++u) {
    t.X(Eigen::Index(u), u < 5 ? 0 : 1) = 1.0;
    t.labels.push_back(u < 5 ? 0 : 1);
    t.mask.push_back(u);
  }
  return t;
}

double accuracy(const Eigen::VectorXd& p, const std::vector<int>& labels) {
  int right = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) right += ((p(i) >= 0.5) == (labels[std::size_t(i)] == 1));
  return double(right) / double(p.size());
}

constexpr double kTol = 1e-4;

// Central differences are meaningless across a ReLU kink.
bool clear_of_kinks(const Eigen::MatrixXd& pre) { return pre.cwiseAbs().minCoeff() > 1e-3; }

}  // namespace

TEST(Gcn, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(101);
  const auto A = normalize_adjacency(four_node_graph());
  for (int trial = 0; trial < 5; ++trial) {
    const auto X = random_features(rng, 4, 3);
    const std::vector<int> labels = {1, 0, 1, 0};
    const std::vector<std::size_t> mask = {0, 1, 2, 3};
    auto m = GcnModel::glorot(3, 5, rng());
    randomize_biases(rng, m.b1, m.b2);
    Eigen::MatrixXd pre = A * (X * m.W1);
    pre.rowwise() += m.b1.transpose();
    if (!clear_of_kinks(pre)) {
      --trial;
      continue;
    }
    GcnGradient g;
    gcn_loss_and_gradient(m, A, X, labels, mask, &g);
    auto f = [&] { return gcn_loss_and_gradient(m, A, X, labels, mask, nullptr); };
    EXPECT_LE(oracle::max_relative_error(g.W1, oracle::numeric_gradient(m.W1, f)), kTol);
    EXPECT_LE(oracle::max_relative_error(g.W2, oracle::numeric_gradient(m.W2, f)), kTol);
    Eigen::MatrixXd b1 = m.b1;
    auto fb = [&] {
      m.b1 = b1.col(0);
      return f();
    };
    const Eigen::MatrixXd gb1 = oracle::numeric_gradient(b1, fb);
    m.b1 = b1.col(0);
    EXPECT_LE(oracle::max_relative_error(Eigen::MatrixXd(g.b1), gb1), kTol);
    const double gb2 = oracle::numeric_gradient(m.b2, f);
    EXPECT_LE(std::abs(g.b2 - gb2) / std::max({std::abs(g.b2), std::abs(gb2), 1e-8}), kTol);
  }
}

TEST(Gcn, PartialMaskGradient) {
  std::mt19937_64 rng(103);
  const auto A = normalize_adjacency(four_node_graph());
  const auto X = random_features(rng, 4, 2);
  const std::vector<int> labels = {1, 0, 1, 0};
  const std::vector<std::size_t> mask = {0, 3};
  auto m = GcnModel::glorot(2, 3, 5);
  GcnGradient g;
  gcn_loss_and_gradient(m, A, X, labels, mask, &g);
  auto f = [&] { return gcn_loss_and_gradient(m, A, X, labels, mask, nullptr); };
  EXPECT_LE(oracle::max_relative_error(g.W1, oracle::numeric_gradient(m.W1, f)), kTol);
  EXPECT_LE(oracle::max_relative_error(g.W2, oracle::numeric_gradient(m.W2, f)), kTol);
}

TEST(Gcn, ZeroWeightsGiveHalf) {
  std::mt19937_64 rng(1);
  const auto A = normalize_adjacency(four_node_graph());
  const auto p = gcn_forward(GcnModel::zeros(3, 4), A, random_features(rng, 4, 3));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_EQ(p(i), 0.5);
}

TEST(Gcn, SingleNodeForward) {
  auto m = GcnModel::zeros(1, 1);
  m.W1(0, 0) = 1.0;
  m.W2(0, 0) = 1.0;
  const auto A = normalize_adjacency(KnnGraph(1, {{}}));
  Eigen::MatrixXd X(1, 1);
  X(0, 0) = 0.3;
  const auto p = gcn_forward(m, A, X);
  EXPECT_NEAR(p(0), sigmoid(0.3), 1e-12);
  EXPECT_NEAR(p(0), 0.5744, 1e-4);
}

TEST(Gcn, TwoNodeSymmetry) {
  const auto A = normalize_adjacency(KnnGraph(1, {{{1, 1.0}}, {{0, 1.0}}}));
  const Eigen::MatrixXd dense(A);
  EXPECT_NEAR((dense.array() - 0.5).abs().maxCoeff(), 0.0, 1e-15);
  Eigen::MatrixXd X(2, 2);
  X << 0.7, -0.2, 0.7, -0.2;
  const auto p = gcn_forward(GcnModel::glorot(2, 3, 9), A, X);
  EXPECT_EQ(p(0), p(1));
}

TEST(Gcn, NoEdgesIsPerNodeModel) {
  std::mt19937_64 rng(3);
  const auto A = normalize_adjacency(KnnGraph(1, {{}, {}, {}}));
  const auto X = random_features(rng, 3, 4);
  auto m = GcnModel::glorot(4, 3, 11);
  randomize_biases(rng, m.b1, m.b2);
  const auto p = gcn_forward(m, A, X);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const Eigen::RowVectorXd h = ((X.row(i) * m.W1).transpose() + m.b1).cwiseMax(0.0).transpose();
    EXPECT_NEAR(p(i), sigmoid((h * m.W2)(0, 0) + m.b2), 1e-12);
  }
}

TEST(Gcn, TwoCliquesReachPerfectAccuracy) {
  const auto t = two_cliques();
  TrainConfig cfg;
  const auto A = normalize_adjacency(t.graph);
  const auto m = train_gcn(A, t.X, t.labels, t.mask, cfg);
  EXPECT_EQ(m.loss_history.size(), 50u);
  EXPECT_EQ(accuracy(gcn_forward(m, A, t.X), t.labels), 1.0);
}

TEST(Gcn, SeededTrainingIsDeterministic) {
  const auto t = two_cliques();
  TrainConfig cfg;
  cfg.epochs = 20;
  const auto A = normalize_adjacency(t.graph);
  const auto a = train_gcn(A, t.X, t.labels, t.mask, cfg);
  const auto b = train_gcn(A, t.X, t.labels, t.mask, cfg);
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_EQ(a.W1, b.W1);
  cfg.seed = 7;
  EXPECT_NE(train_gcn(A, t.X, t.labels, t.mask, cfg).loss_history, a.loss_history);
}

TEST(Gcn, RejectsBadMasksAndShapes) {
  const auto t = two_cliques();
  const auto A = normalize_adjacency(t.graph);
  TrainConfig cfg;
  EXPECT_THROW(train_gcn(A, t.X, t.labels, {}, cfg), PreconditionError);
  const std::vector<std::size_t> one_class = {0, 1, 2};
  EXPECT_THROW(train_gcn(A, t.X, t.labels, one_class, cfg), PreconditionError);
  EXPECT_THROW(gcn_forward(GcnModel::zeros(3, 2), A, t.X), PreconditionError);
  EXPECT_THROW(gcn_forward(GcnModel::zeros(2, 2), A, t.X.topRows(4)), PreconditionError);
}

TEST(Gcn, NonFiniteLossRaisesDivergence) {
  auto t = two_cliques();
  t.X *= std::numeric_limits<double>::infinity();
  const auto A = normalize_adjacency(t.graph);
  EXPECT_THROW(train_gcn(A, t.X, t.labels, t.mask, TrainConfig{}), DivergenceError);
}

TEST(Sage, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(202);
  const auto M = mean_aggregation(four_node_graph());
  for (int trial = 0; trial < 5; ++trial) {
    const auto X = random_features(rng, 4, 3);
    const std::vector<int> labels = {0, 1, 1, 0};
    const std::vector<std::size_t> mask = {0, 1, 2, 3};
    auto m = SageModel::glorot(3, 5, rng());
    randomize_biases(rng, m.b1, m.b2);
    Eigen::MatrixXd pre = X * m.Ws1 + M * (X * m.Wn1);
    pre.rowwise() += m.b1.transpose();
    if (!clear_of_kinks(pre)) {
      --trial;
      continue;
    }
    SageGradient g;
    sage_loss_and_gradient(m, M, X, labels, mask, &g);
    auto f = [&] { return sage_loss_and_gradient(m, M, X, labels, mask, nullptr); };
    EXPECT_LE(oracle::max_relative_error(g.Ws1, oracle::numeric_gradient(m.Ws1, f)), kTol);
    EXPECT_LE(oracle::max_relative_error(g.Wn1, oracle::numeric_gradient(m.Wn1, f)), kTol);
    Eigen::MatrixXd ws2 = m.ws2;
    Eigen::MatrixXd wn2 = m.wn2;
    Eigen::MatrixXd b1 = m.b1;
    auto f_ws2 = [&] { m.ws2 = ws2.col(0); return f(); };
    auto f_wn2 = [&] { m.wn2 = wn2.col(0); return f(); };
    auto f_b1 = [&] { m.b1 = b1.col(0); return f(); };
    const Eigen::MatrixXd n_ws2 = oracle::numeric_gradient(ws2, f_ws2);
    m.ws2 = ws2.col(0);
    const Eigen::MatrixXd n_wn2 = oracle::numeric_gradient(wn2, f_wn2);
    m.wn2 = wn2.col(0);
    const Eigen::MatrixXd n_b1 = oracle::numeric_gradient(b1, f_b1);
    m.b1 = b1.col(0);
    EXPECT_LE(oracle::max_relative_error(Eigen::MatrixXd(g.ws2), n_ws2), kTol);
    EXPECT_LE(oracle::max_relative_error(Eigen::MatrixXd(g.wn2), n_wn2), kTol);
    EXPECT_LE(oracle::max_relative_error(Eigen::MatrixXd(g.b1), n_b1), kTol);
    const double gb2 = oracle::numeric_gradient(m.b2, f);
    EXPECT_LE(std::abs(g.b2 - gb2) / std::max({std::abs(g.b2), std::abs(gb2), 1e-8}), kTol);
  }
}

TEST(Sage, ZeroWeightsGiveHalf) {
  std::mt19937_64 rng(2);
  const auto g = four_node_graph();
  const std::vector<std::size_t> all = {0, 1, 2, 3};
  const auto p = sage_forward(SageModel::zeros(3, 4), g, random_features(rng, 4, 3), all);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_EQ(p(i), 0.5);
}

TEST(Sage, IsolatedNodeUsesSelfPathOnly) {
  std::mt19937_64 rng(5);
  const KnnGraph g(1, {{{1, 1.0}}, {{0, 1.0}}, {}});
  auto X = random_features(rng, 3, 2);
  auto m = SageModel::glorot(2, 4, 3);
  randomize_biases(rng, m.b1, m.b2);
  const std::vector<std::size_t> target = {2};
  const double before = sage_forward(m, g, X, target)(0);
  X.row(0) *= 5.0;
  X.row(1).setConstant(-3.0);
  EXPECT_EQ(sage_forward(m, g, X, target)(0), before);
  const Eigen::VectorXd h = ((X.row(2) * m.Ws1).transpose() + m.b1).cwiseMax(0.0);
  EXPECT_NEAR(before, sigmoid(h.dot(m.ws2) + m.b2), 1e-12);
}

TEST(Sage, StarGraphClosedForm) {
  // Centre 0, identical leaves 1..3, one hidden unit.
  const KnnGraph g(1, {{{1, 1.0}, {2, 1.0}, {3, 1.0}}, {{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}});
  auto m = SageModel::zeros(1, 1);
  const double ws = 0.8, wn = 0.5, b1 = 0.1, s2 = 1.2, n2 = -0.7, b2 = 0.05;
  m.Ws1(0, 0) = ws;
  m.Wn1(0, 0) = wn;
  m.b1(0) = b1;
  m.ws2(0) = s2;
  m.wn2(0) = n2;
  m.b2 = b2;
  Eigen::MatrixXd X(4, 1);
  const double xc = 0.4, xl = 0.9;
  X << xc, xl, xl, xl;
  const double h_centre = std::max(0.0, ws * xc + wn * xl + b1);
  const double h_leaf = std::max(0.0, ws * xl + wn * xc + b1);
  const std::vector<std::size_t> targets = {0, 1};
  const auto p = sage_forward(m, g, X, targets);
  EXPECT_NEAR(p(0), sigmoid(h_centre * s2 + h_leaf * n2 + b2), 1e-12);
  EXPECT_NEAR(p(1), sigmoid(h_leaf * s2 + h_centre * n2 + b2), 1e-12);
}

TEST(Sage, RelabelingNodesPermutesOutputs) {
  std::mt19937_64 rng(8);
  const auto g = four_node_graph();
  const auto X = random_features(rng, 4, 3);
  auto m = SageModel::glorot(3, 4, 21);
  randomize_biases(rng, m.b1, m.b2);
  const std::vector<std::size_t> perm = {2, 0, 3, 1};  // old node i becomes perm[i]
  std::vector<std::vector<Neighbor>> adj(4);
  Eigen::MatrixXd Xp(4, 3);
  for (std::size_t u = 0; u < 4; ++u) {
    Xp.row(Eigen::Index(perm[u])) = X.row(Eigen::Index(u));
    auto list = g.neighbors(u);
    std::reverse(list.begin(), list.end());
    for (const auto& nb : list) adj[perm[u]].push_back({perm[nb.node], nb.weight});
  }
  const KnnGraph gp(1, adj);
  const std::vector<std::size_t> all = {0, 1, 2, 3};
  const auto p = sage_forward(m, g, X, all);
  const auto pp = sage_forward(m, gp, Xp, all);
  for (std::size_t u = 0; u < 4; ++u) EXPECT_NEAR(pp(Eigen::Index(perm[u])), p(Eigen::Index(u)), 1e-14);
}

TEST(Sage, TwoCliquesReachPerfectAccuracy) {
  const auto t = two_cliques();
  TrainConfig cfg;
  const auto m = train_sage(t.graph, t.X, t.labels, t.mask, cfg);
  EXPECT_EQ(m.loss_history.size(), 50u);
  EXPECT_EQ(accuracy(sage_forward(m, t.graph, t.X, t.mask), t.labels), 1.0);
}

TEST(Sage, SeededTrainingIsDeterministic) {
  const auto t = two_cliques();
  TrainConfig cfg;
  cfg.epochs = 20;
  const auto a = train_sage(t.graph, t.X, t.labels, t.mask, cfg);
  const auto b = train_sage(t.graph, t.X, t.labels, t.mask, cfg);
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_EQ(a.Ws1, b.Ws1);
}

TEST(Sage, RejectsBadTargetsAndMasks) {
  const auto t = two_cliques();
  const std::vector<std::size_t> bad = {10};
  EXPECT_THROW(sage_forward(SageModel::zeros(2, 2), t.graph, t.X, bad), PreconditionError);
  const std::vector<std::size_t> one_class = {5, 6};
  EXPECT_THROW(train_sage(t.graph, t.X, t.labels, one_class, TrainConfig{}), PreconditionError);
}

TEST(Models, ProbabilitiesStayInsideUnitInterval) {
  EXPECT_GT(probability(-1e6), 0.0);
  EXPECT_LT(probability(1e6), 1.0);
  EXPECT_EQ(probability(0.0), 0.5);
  std::mt19937_64 rng(12);
  const auto g = four_node_graph();
  const auto A = normalize_adjacency(g);
  const std::vector<std::size_t> all = {0, 1, 2, 3};
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd X = random_features(rng, 4, 3) * 1e4;
    const auto pg = gcn_forward(GcnModel::glorot(3, 4, rng()), A, X);
    const auto ps = sage_forward(SageModel::glorot(3, 4, rng()), g, X, all);
    for (Eigen::Index i = 0; i < 4; ++i) {
      EXPECT_TRUE(pg(i) > 0.0 && pg(i) < 1.0);
      EXPECT_TRUE(ps(i) > 0.0 && ps(i) < 1.0);
    }
  }
}
