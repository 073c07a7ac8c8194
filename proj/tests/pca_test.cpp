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

#include <random>

#include "clickbait/error.hpp"
#include "clickbait/pca.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace clickbait;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = dist(rng) * double(j + 1);
  }
  return X;
}

double reconstruction_error(const Eigen::MatrixXd& X, Eigen::Index k) {
  const auto m = pca_fit(X, k);
  return (X - pca_reconstruct(m, pca_transform(m, X))).norm();
}

}  // namespace

TEST(Pca, CollinearPointsHaveOneComponent) {
  Eigen::MatrixXd X(6, 2);
  for (int i = 0; i < 6; ++i) {
    const double t = i * i - 2.5 * i;
    X(i, 0) = 1.0 + 2.0 * t;
    X(i, 1) = -3.0 + 0.5 * t;
  }
  const auto m = pca_fit(X, 1);
  EXPECT_NEAR(m.explained_variance_ratio(0), 1.0, 1e-9);
}

TEST(Pca, MatchesCovarianceEigenvectors) {
  Eigen::MatrixXd X(5, 3);
  X << 2.0, 0.5, -1.0,
       1.0, 3.0, 0.0,
       -1.5, 1.0, 2.0,
       0.0, -2.0, 1.0,
       4.0, 1.5, -0.5;
  const auto m = pca_fit(X, 3);
  const auto eig = oracle::jacobi_eigen(oracle::covariance(X));
  for (int c = 0; c < 3; ++c) {
    const auto expect = oracle::canonical_sign(eig.vectors[c]);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(m.components(c, j), expect[j], 1e-6);
    EXPECT_NEAR(m.explained_variance(c), eig.values[c], 1e-9);
  }
}

TEST(Pca, RandomMatricesMatchOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto X = random_matrix(rng, 20, 8);
    const auto m = pca_fit(X, 8);
    const auto eig = oracle::jacobi_eigen(oracle::covariance(X));
    for (int c = 0; c < 8; ++c) {
      const auto expect = oracle::canonical_sign(eig.vectors[c]);
      for (int j = 0; j < 8; ++j) ASSERT_NEAR(m.components(c, j), expect[j], 1e-6) << trial;
    }
  }
}

TEST(Pca, RankBound) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(pca_fit(random_matrix(rng, 3, 6), 5), PreconditionError);
  EXPECT_THROW(pca_fit(random_matrix(rng, 1, 6), 1), PreconditionError);
  auto X = random_matrix(rng, 4, 3);
  X(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(pca_fit(X, 1), PreconditionError);
}

TEST(Pca, OrthonormalAndOrderedRatios) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = 5 + static_cast<Eigen::Index>(rng() % 20);
    const auto d = 2 + static_cast<Eigen::Index>(rng() % 10);
    const auto k = 1 + static_cast<Eigen::Index>(rng() % std::min<Eigen::Index>(n - 1, d));
    const auto m = pca_fit(random_matrix(rng, n, d), k);
    const Eigen::MatrixXd gram = m.components * m.components.transpose();
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-8);
    double sum = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) {
      EXPECT_GE(m.explained_variance_ratio(c), 0.0);
      EXPECT_LE(m.explained_variance_ratio(c), 1.0);
      if (c > 0) EXPECT_LE(m.explained_variance_ratio(c), m.explained_variance_ratio(c - 1) + 1e-15);
      sum += m.explained_variance_ratio(c);
    }
    EXPECT_LE(sum, 1.0 + 1e-9);
  }
}

TEST(Pca, ReconstructionErrorNonIncreasing) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto X = random_matrix(rng, 12, 6);
    double prev = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 1; k <= 6; ++k) {
      const double e = reconstruction_error(X, k);
      EXPECT_LE(e, prev + 1e-9);
      prev = e;
    }
    EXPECT_LT(prev, 1e-8);
  }
}

TEST(Pca, ReconstructionMatchesTruncatedSvd) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto X = random_matrix(rng, 20, 8);
    // Eckart-Young: the best rank-k error is the tail of the singular values.
    const auto eig = oracle::jacobi_eigen(oracle::covariance(X));
    for (Eigen::Index k = 1; k <= 8; ++k) {
      double tail = 0.0;
      for (std::size_t c = static_cast<std::size_t>(k); c < 8; ++c) tail += eig.values[c] * 19.0;
      EXPECT_NEAR(reconstruction_error(X, k), std::sqrt(std::max(tail, 0.0)), 1e-6);
    }
  }
}

TEST(Pca, TransformCentersMean) {
  std::mt19937_64 rng(6);
  const auto X = random_matrix(rng, 10, 4);
  const auto m = pca_fit(X, 3);
  const Eigen::MatrixXd mean_row = X.colwise().mean();
  EXPECT_LT(pca_transform(m, mean_row).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_THROW(pca_transform(m, Eigen::MatrixXd::Zero(2, 5)), PreconditionError);
}

TEST(Pca, FullRankPreservesDistances) {
  std::mt19937_64 rng(7);
  const auto X = random_matrix(rng, 6, 9);  // centered rank is 5
  const auto Z = pca_transform(pca_fit(X, 5), X);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) {
      EXPECT_NEAR((Z.row(i) - Z.row(j)).norm(), (X.row(i) - X.row(j)).norm(), 1e-6);
    }
  }
}

TEST(Pca, ProjectedVarianceEqualsExplained) {
  std::mt19937_64 rng(8);
  const auto X = random_matrix(rng, 15, 5);
  const auto m = pca_fit(X, 4);
  const auto Z = pca_transform(m, X);
  for (Eigen::Index c = 0; c < 4; ++c) {
    const double mu = Z.col(c).mean();
    const double var = (Z.col(c).array() - mu).square().sum() / 14.0;
    EXPECT_NEAR(var, m.explained_variance(c), 1e-6);
  }
}

TEST(Pca, SaveLoadRoundTrip) {
  testing_support::TempDir dir("pca");
  std::mt19937_64 rng(9);
  const auto X = random_matrix(rng, 10, 6);
  const auto m = pca_fit(X, 3);
  save_pca(dir / "p.model", m);
  const auto back = load_pca(dir / "p.model");
  ASSERT_EQ(back.output_dim(), 3);
  ASSERT_EQ(back.input_dim(), 6);
  EXPECT_LT((back.components - m.components).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((back.mean - m.mean).cwiseAbs().maxCoeff(), 1e-5);
  testing_support::write_file(dir / "bad.model", "nope");
  EXPECT_THROW(load_pca(dir / "bad.model"), FormatError);
}

TEST(Pca, MemoryFootprintArithmetic) {
  const auto raw = memory_footprint(40000, 3072, 4);
  EXPECT_EQ(raw.bytes, 491520000u);
  EXPECT_NEAR(raw.decimal_mb, 491.52, 1e-9);
  const auto reduced = memory_footprint(40000, 1000, 4);
  EXPECT_EQ(reduced.bytes, 160000000u);
  EXPECT_NEAR(reduced.binary_mib, 152.587890625, 1e-9);
  EXPECT_NE(reduced.describe().find("152.6 MiB"), std::string::npos);
  EXPECT_EQ(memory_footprint(0, 3072, 4).bytes, 0u);
}
