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

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace clickbait {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Predicts 1 iff score >= threshold.
ConfusionMatrix confusion_at_threshold(std::span<const int> labels, std::span<const double> scores,
                                       double threshold = 0.5);

double precision(const ConfusionMatrix& cm);  // 0 when nothing is predicted positive
double recall(const ConfusionMatrix& cm);     // 0 when there are no positives
// Harmonic mean of precision and recall; 0 when tp == 0.
double f1_from_confusion(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = std::numeric_limits<double>::infinity();
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) first, (1,1) last
};

struct RocResult {
  RocCurve curve;
  double auc = 0.0;
};

// Sweeps the distinct scores in descending order, one step per group of
// equal scores, and integrates with the trapezoid rule. Throws
// PreconditionError unless both classes are present.
RocResult roc_and_auc(std::span<const int> labels, std::span<const double> scores);

// "fpr,tpr,threshold" header plus one row per point.
std::string roc_to_csv(const RocCurve& curve);

struct EvalReport {
  std::string model;
  std::size_t n = 0;
  double threshold = 0.5;
  ConfusionMatrix confusion;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;

  std::string to_json() const;
};

EvalReport evaluate_scores(std::string model, std::span<const int> labels, std::span<const double> scores,
                           double threshold = 0.5);

struct LatencyReport {
  double total_seconds = 0.0;  // median over repetitions of one full pass
  std::size_t n_samples = 0;
  double per_sample_ms = 0.0;  // 1000 * total_seconds / n_samples
  int repetitions = 0;
  int warmup_runs = 0;
  double median_per_sample_ms = 0.0;
  double p95_per_sample_ms = 0.0;
  std::vector<double> repetition_seconds;

  std::string to_json() const;
};

// Times `forward`, one call covering all `n_samples` inputs, on a monotonic
// clock after `warmup` untimed calls.
LatencyReport bench_latency(const std::function<void()>& forward, std::size_t n_samples, int repetitions = 10,
                            int warmup = 3);

// Median and nearest-rank 95th percentile; throw on empty input.
double median(std::vector<double> values);
double percentile95(std::vector<double> values);

}  // namespace clickbait
