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

// Slow, obviously-correct reference implementations used as test oracles.
// None of them share code with the library.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

struct EigenPairs {
  std::vector<double> values;               // descending
  std::vector<std::vector<double>> vectors; // vectors[i] pairs with values[i]
};

// Cyclic Jacobi rotations on a symmetric matrix.
inline EigenPairs jacobi_eigen(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  EigenPairs out;
  for (const auto i : order) {
    out.values.push_back(a[i][i]);
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = v[k][i];
    out.vectors.push_back(col);
  }
  return out;
}

// Sample covariance with the n - 1 denominator, by explicit sums.
inline std::vector<std::vector<double>> covariance(const Eigen::MatrixXd& X) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto d = static_cast<std::size_t>(X.cols());
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  std::vector<std::vector<double>> c(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = 0; q < d; ++q) {
        c[p][q] += (X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) - mean[p]) *
                   (X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) - mean[q]);
      }
    }
  }
  for (auto& row : c) {
    for (auto& x : row) x /= static_cast<double>(n - 1);
  }
  return c;
}

// Flip so the entry of largest magnitude is positive.
inline std::vector<double> canonical_sign(std::vector<double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0) {
    for (auto& x : v) x = -x;
  }
  return v;
}

// Cosine k-nearest neighbors by exhaustive comparison, ties to the lower
// index, then union-symmetrized. Returns sorted neighbor sets.
inline std::vector<std::set<std::size_t>> brute_force_knn(const std::vector<std::vector<double>>& points,
                                                          std::size_t k) {
  const std::size_t n = points.size();
  auto cosine = [&](std::size_t a, std::size_t b) {
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t j = 0; j < points[a].size(); ++j) {
      dot += points[a][j] * points[b][j];
      na += points[a][j] * points[a][j];
      nb += points[b][j] * points[b][j];
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
  };
  std::vector<std::set<std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) cand.emplace_back(cosine(i, j), j);
    }
    std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    for (std::size_t r = 0; r < k; ++r) {
      out[i].insert(cand[r].second);
      out[cand[r].second].insert(i);
    }
  }
  return out;
}

// Mann-Whitney statistic: fraction of (positive, negative) pairs ranked
// correctly, ties counted one half.
inline double pair_count_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  double good = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        good += 1.0;
      } else if (scores[i] == scores[j]) {
        good += 0.5;
      }
    }
  }
  return good / pairs;
}

// Best single-threshold accuracy on one feature, trying every midpoint.
inline double best_stump_accuracy(const std::vector<double>& x, const std::vector<int>& y) {
  std::vector<double> cuts = x;
  std::sort(cuts.begin(), cuts.end());
  double best = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double t = (cuts[c] + cuts[c + 1]) / 2.0;
    for (const int polarity : {0, 1}) {
      std::size_t right = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const int pred = (x[i] >= t) ? polarity : 1 - polarity;
        if (pred == y[i]) ++right;
      }
      best = std::max(best, static_cast<double>(right) / static_cast<double>(x.size()));
    }
  }
  return best;
}

// Central difference of f along every entry of `param`; restores it.
template <typename Mat>
Mat numeric_gradient(Mat& param, const std::function<double()>& f, double eps = 1e-5) {
  Mat g(param.rows(), param.cols());
  for (Eigen::Index r = 0; r < param.rows(); ++r) {
    for (Eigen::Index c = 0; c < param.cols(); ++c) {
      const double keep = param(r, c);
      param(r, c) = keep + eps;
      const double up = f();
      param(r, c) = keep - eps;
      const double down = f();
      param(r, c) = keep;
      g(r, c) = (up - down) / (2.0 * eps);
    }
  }
  return g;
}

inline double numeric_gradient(double& param, const std::function<double()>& f, double eps = 1e-5) {
  const double keep = param;
  param = keep + eps;
  const double up = f();
  param = keep - eps;
  const double down = f();
  param = keep;
  return (up - down) / (2.0 * eps);
}

// max |a - b| / max(|a|, |b|, floor) over all entries.
template <typename A, typename B>
double max_relative_error(const A& a, const B& b, double floor = 1e-8) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const double x = a(r, c);
      const double y = b(r, c);
      worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), floor}));
    }
  }
  return worst;
}

}  // namespace oracle
