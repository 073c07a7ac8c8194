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
#include <cmath>
#include <random>
#include <span>

#include "clickbait/rng.hpp"

namespace clickbait::detail {

// Adam with the usual defaults; one Moments per parameter block.
class Adam {
 public:
  explicit Adam(double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  template <typename Derived>
  struct Moments {
    Derived m;
    Derived v;
    explicit Moments(const Derived& like) : m(Derived::Zero(like.rows(), like.cols())), v(m) {}
  };

  struct ScalarMoments {
    double m = 0.0;
    double v = 0.0;
  };

  void next_step() { ++t_; }

  template <typename Derived>
  void update(Derived& param, const Derived& grad, Moments<Derived>& s) const {
    s.m = beta1_ * s.m + (1.0 - beta1_) * grad;
    s.v = beta2_ * s.v + (1.0 - beta2_) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    param.array() -= lr_ * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + eps_);
  }

  void update(double& param, double grad, ScalarMoments& s) const {
    s.m = beta1_ * s.m + (1.0 - beta1_) * grad;
    s.v = beta2_ * s.v + (1.0 - beta2_) * grad * grad;
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    param -= lr_ * (s.m / c1) / (std::sqrt(s.v / c2) + eps_);
  }

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  int t_ = 0;
};

// Mean BCE-with-logits over `mask`; writes dL/dz into `dz` (zero off-mask).
inline double masked_logistic_loss(const Eigen::VectorXd& z, std::span<const int> labels,
                                   std::span<const std::size_t> mask, Eigen::VectorXd* dz) {
  if (dz) dz->setZero(z.size());
  const double inv_m = 1.0 / static_cast<double>(mask.size());
  double total = 0.0;
  for (const auto i : mask) {
    const double zi = z(static_cast<Eigen::Index>(i));
    const double softplus = zi > 0 ? zi + std::log1p(std::exp(-zi)) : std::log1p(std::exp(zi));
    total += softplus - labels[i] * zi;
    if (dz) {
      const double p = zi >= 0 ? 1.0 / (1.0 + std::exp(-zi)) : std::exp(zi) / (1.0 + std::exp(zi));
      (*dz)(static_cast<Eigen::Index>(i)) = (p - labels[i]) * inv_m;
    }
  }
  return total * inv_m;
}

// Uniform(-limit, limit) with limit = sqrt(6 / (fan_in + fan_out)).
inline Eigen::MatrixXd glorot_uniform(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = (2.0 * uniform_unit(rng) - 1.0) * limit;
  }
  return out;
}

}  // namespace clickbait::detail
