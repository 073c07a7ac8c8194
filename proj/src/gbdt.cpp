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
#include <numeric>

#include "clickbait/error.hpp"
#include "clickbait/models.hpp"

namespace clickbait {

float RegressionTree::leaf_value(std::span<const float> x) const {
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const auto& node = nodes[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(node.feature)] < node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<std::size_t>(i)].leaf;
}

int RegressionTree::depth() const {
  // Nodes are appended parent-before-child, so one forward pass suffices.
  std::vector<int> level(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].feature < 0) continue;
    for (const int child : {nodes[i].left, nodes[i].right}) {
      level[static_cast<std::size_t>(child)] = level[i] + 1;
      deepest = std::max(deepest, level[i] + 1);
    }
  }
  return deepest;
}

double GbdtModel::margin(std::span<const float> x) const {
  double sum = 0.0;
  for (const auto& tree : trees) sum += tree.leaf_value(x);
  return base_score + learning_rate * sum;
}

double gbdt_predict(const GbdtModel& model, std::span<const float> x) {
  if (x.size() != model.n_features) {
    throw PreconditionError("GBDT expects " + std::to_string(model.n_features) + " features, got " +
                            std::to_string(x.size()));
  }
  return probability(model.margin(x));
}

Eigen::VectorXd gbdt_predict(const GbdtModel& model, const RowMatrixF& X) {
  if (static_cast<std::size_t>(X.cols()) != model.n_features) {
    throw PreconditionError("GBDT expects " + std::to_string(model.n_features) + " features");
  }
  Eigen::VectorXd out(X.rows());
  const auto d = static_cast<std::size_t>(X.cols());
  for (Eigen::Index r = 0; r < X.rows(); ++r) out(r) = probability(model.margin(std::span(X.row(r).data(), d)));
  return out;
}

namespace {

// log(1 + e^z) - y z, stable for large |z|.
double logistic_loss(double margin, int label) {
  const double softplus = margin > 0 ? margin + std::log1p(std::exp(-margin)) : std::log1p(std::exp(margin));
  return softplus - label * margin;
}

double mean_loss(const std::vector<double>& margins, std::span<const int> labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < margins.size(); ++i) total += logistic_loss(margins[i], labels[i]);
  return total / static_cast<double>(margins.size());
}

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  float threshold = 0.0f;
};

// Threshold strictly above `lo` and at most `hi`, so `lo` goes left and `hi`
// goes right under the `x < threshold` rule.
float split_threshold(float lo, float hi) {
  auto t = static_cast<float>((static_cast<double>(lo) + static_cast<double>(hi)) / 2.0);
  if (!(t > lo)) t = std::nextafter(lo, hi);
  if (t > hi) t = hi;
  return t;
}

class TreeBuilder {
 public:
  TreeBuilder(const RowMatrixF& X, const std::vector<std::vector<std::uint32_t>>& sorted,
              const GbdtParams& params)
      : X_(X), sorted_(sorted), params_(params) {}

  RegressionTree build(const std::vector<double>& grad, const std::vector<double>& hess) {
    const auto n = static_cast<std::size_t>(X_.rows());
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::vector<int> node_of(n, 0);  // tree node holding each sample; -1 once in a leaf
    std::vector<int> frontier = {0};

    for (int level = 0; level <= params_.max_depth && !frontier.empty(); ++level) {
      const auto tree_size = tree.nodes.size();
      std::vector<double> g_sum(tree_size, 0.0);
      std::vector<double> h_sum(tree_size, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (node_of[i] < 0) continue;
        g_sum[static_cast<std::size_t>(node_of[i])] += grad[i];
        h_sum[static_cast<std::size_t>(node_of[i])] += hess[i];
      }

      std::vector<SplitCandidate> best(tree_size);
      if (level < params_.max_depth) find_splits(node_of, grad, hess, g_sum, h_sum, best);

      std::vector<int> next;
      for (const int id : frontier) {
        const auto u = static_cast<std::size_t>(id);
        if (best[u].feature < 0) {
          tree.nodes[u].leaf = static_cast<float>(-g_sum[u] / (h_sum[u] + params_.lambda));
          continue;
        }
        tree.nodes[u].feature = best[u].feature;
        tree.nodes[u].threshold = best[u].threshold;
        tree.nodes[u].left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[u].right = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        next.push_back(tree.nodes[u].left);
        next.push_back(tree.nodes[u].right);
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (node_of[i] < 0) continue;
        const auto& node = tree.nodes[static_cast<std::size_t>(node_of[i])];
        if (node.feature < 0) {
          node_of[i] = -1;
        } else {
          node_of[i] = X_(static_cast<Eigen::Index>(i), node.feature) < node.threshold ? node.left : node.right;
        }
      }
      frontier = std::move(next);
    }
    return tree;
  }

 private:
  double score(double g, double h) const { return g * g / (h + params_.lambda); }

  // One scan per feature over the presorted order; each frontier node keeps
  // its own running left-hand sums.
  void find_splits(const std::vector<int>& node_of, const std::vector<double>& grad,
                   const std::vector<double>& hess, const std::vector<double>& g_sum,
                   const std::vector<double>& h_sum, std::vector<SplitCandidate>& best) const {
    const auto m = g_sum.size();
    std::vector<double> g_left(m);
    std::vector<double> h_left(m);
    std::vector<float> last(m);
    std::vector<char> seen(m);
    for (Eigen::Index f = 0; f < X_.cols(); ++f) {
      std::fill(g_left.begin(), g_left.end(), 0.0);
      std::fill(h_left.begin(), h_left.end(), 0.0);
      std::fill(seen.begin(), seen.end(), 0);
      for (const auto i : sorted_[static_cast<std::size_t>(f)]) {
        const int id = node_of[i];
        if (id < 0) continue;
        const auto u = static_cast<std::size_t>(id);
        const float v = X_(static_cast<Eigen::Index>(i), f);
        if (seen[u] && v > last[u]) {
          const double gl = g_left[u];
          const double hl = h_left[u];
          const double gr = g_sum[u] - gl;
          const double hr = h_sum[u] - hl;
          if (hl >= params_.min_child_weight && hr >= params_.min_child_weight) {
            const double gain = 0.5 * (score(gl, hl) + score(gr, hr) - score(g_sum[u], h_sum[u]));
            if (gain > best[u].gain) best[u] = {gain, static_cast<int>(f), split_threshold(last[u], v)};
          }
        }
        g_left[u] += grad[i];
        h_left[u] += hess[i];
        last[u] = v;
        seen[u] = 1;
      }
    }
  }

  const RowMatrixF& X_;
  const std::vector<std::vector<std::uint32_t>>& sorted_;
  const GbdtParams& params_;
};

}  // namespace

GbdtModel train_gbdt(const RowMatrixF& X, std::span<const int> labels, const TrainConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(X.rows());
  if (n < 2 || labels.size() != n) throw PreconditionError("GBDT needs >= 2 samples with aligned labels");
  if (!X.allFinite()) throw PreconditionError("GBDT features must be finite");
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(n)) {
    throw PreconditionError("GBDT training needs both classes present");
  }

  GbdtModel model;
  model.learning_rate = cfg.gbdt.learning_rate;
  model.n_features = static_cast<std::size_t>(X.cols());
  const double prior = static_cast<double>(positives) / static_cast<double>(n);
  model.base_score = std::log(prior / (1.0 - prior));

  std::vector<std::vector<std::uint32_t>> sorted(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index f = 0; f < X.cols(); ++f) {
    auto& order = sorted[static_cast<std::size_t>(f)];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return X(static_cast<Eigen::Index>(a), f) < X(static_cast<Eigen::Index>(b), f);
    });
  }

  std::vector<double> margins(n, model.base_score);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  model.loss_history.push_back(mean_loss(margins, labels));
  TreeBuilder builder(X, sorted, cfg.gbdt);

  std::vector<double> candidate(n);
  for (int round = 0; round < cfg.gbdt.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = probability(margins[i]);
      grad[i] = p - labels[i];
      hess[i] = std::max(p * (1.0 - p), 1e-16);
    }
    auto tree = builder.build(grad, hess);

    double loss = 0.0;
    bool accepted = false;
    for (int halving = 0; halving < 30 && !accepted; ++halving) {
      for (std::size_t i = 0; i < n; ++i) {
        candidate[i] = margins[i] + model.learning_rate *
                                        tree.leaf_value(std::span(X.row(static_cast<Eigen::Index>(i)).data(), model.n_features));
      }
      loss = mean_loss(candidate, labels);
      accepted = loss <= model.loss_history.back();
      if (!accepted) {
        for (auto& node : tree.nodes) node.leaf *= 0.5f;
      }
    }
    if (!accepted) break;  // no descent direction left
    margins.swap(candidate);
    model.trees.push_back(std::move(tree));
    model.loss_history.push_back(loss);
  }
  return model;
}

}  // namespace clickbait
