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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "clickbait/error.hpp"
#include "clickbait/eval.hpp"
#include "json.hpp"

namespace clickbait {

using nlohmann::ordered_json;

namespace {

void check_inputs(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw PreconditionError("labels (" + std::to_string(labels.size()) + ") and scores (" +
                            std::to_string(scores.size()) + ") differ in length");
  }
  for (const double s : scores) {
    if (!std::isfinite(s)) throw PreconditionError("scores must be finite");
  }
  for (const int y : labels) {
    if (y != 0 && y != 1) throw PreconditionError("labels must be 0 or 1");
  }
}

}  // namespace

ConfusionMatrix confusion_at_threshold(std::span<const int> labels, std::span<const double> scores,
                                       double threshold) {
  check_inputs(labels, scores);
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      ++(predicted ? cm.tp : cm.fn);
    } else {
      ++(predicted ? cm.fp : cm.tn);
    }
  }
  return cm;
}

double precision(const ConfusionMatrix& cm) {
  return cm.tp + cm.fp == 0 ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
}

double recall(const ConfusionMatrix& cm) {
  return cm.tp + cm.fn == 0 ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

double f1_from_confusion(const ConfusionMatrix& cm) {
  if (cm.tp == 0) return 0.0;
  const double p = precision(cm);
  const double r = recall(cm);
  return 2.0 * p * r / (p + r);
}

RocResult roc_and_auc(std::span<const int> labels, std::span<const double> scores) {
  check_inputs(labels, scores);
  const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const auto neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw PreconditionError("ROC-AUC is undefined when only one class is present");

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocResult result;
  auto& pts = result.curve.points;
  pts.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0;
  std::size_t fp = 0;
  double area = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    std::size_t j = i;
    for (; j < order.size() && scores[order[j]] == s; ++j) ++(labels[order[j]] == 1 ? tp : fp);
    const RocPoint next{static_cast<double>(fp) / static_cast<double>(neg),
                        static_cast<double>(tp) / static_cast<double>(pos), s};
    area += (next.fpr - pts.back().fpr) * (next.tpr + pts.back().tpr) / 2.0;
    pts.push_back(next);
    i = j;
  }
  result.auc = area;
  return result;
}

std::string roc_to_csv(const RocCurve& curve) {
  std::string out = "fpr,tpr,threshold\n";
  char buf[96];
  for (const auto& p : curve.points) {
    if (std::isinf(p.threshold)) {
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,inf\n", p.fpr, p.tpr);
    } else {
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", p.fpr, p.tpr, p.threshold);
    }
    out += buf;
  }
  return out;
}

std::string EvalReport::to_json() const {
  ordered_json j;
  j["model"] = model;
  j["n"] = n;
  j["threshold"] = threshold;
  j["confusion"] = {{"tp", confusion.tp}, {"fp", confusion.fp}, {"tn", confusion.tn}, {"fn", confusion.fn}};
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  j["auc"] = auc;
  return j.dump(2);
}

EvalReport evaluate_scores(std::string model, std::span<const int> labels, std::span<const double> scores,
                           double threshold) {
  EvalReport r;
  r.model = std::move(model);
  r.n = labels.size();
  r.threshold = threshold;
  r.confusion = confusion_at_threshold(labels, scores, threshold);
  r.precision = clickbait::precision(r.confusion);
  r.recall = clickbait::recall(r.confusion);
  r.f1 = f1_from_confusion(r.confusion);
  r.auc = roc_and_auc(labels, scores).auc;
  return r;
}

double median(std::vector<double> values) {
  if (values.empty()) throw PreconditionError("median of an empty set");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double percentile95(std::vector<double> values) {
  if (values.empty()) throw PreconditionError("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(values.size())));
  return values[std::max<std::size_t>(rank, 1) - 1];
}

std::string LatencyReport::to_json() const {
  ordered_json j;
  j["total_seconds"] = total_seconds;
  j["n_samples"] = n_samples;
  j["per_sample_ms"] = per_sample_ms;
  j["repetitions"] = repetitions;
  j["warmup_runs"] = warmup_runs;
  j["median_per_sample_ms"] = median_per_sample_ms;
  j["p95_per_sample_ms"] = p95_per_sample_ms;
  j["repetition_seconds"] = repetition_seconds;
  return j.dump(2);
}

LatencyReport bench_latency(const std::function<void()>& forward, std::size_t n_samples, int repetitions,
                            int warmup) {
  if (n_samples == 0) throw PreconditionError("latency benchmark needs at least one input");
  if (repetitions < 1) throw PreconditionError("latency benchmark needs at least one repetition");
  if (warmup < 0) throw PreconditionError("warmup count must be >= 0");

  for (int i = 0; i < warmup; ++i) forward();
  LatencyReport r;
  r.n_samples = n_samples;
  r.repetitions = repetitions;
  r.warmup_runs = warmup;
  using clock = std::chrono::steady_clock;
  std::vector<double> per_sample;
  for (int i = 0; i < repetitions; ++i) {
    const auto start = clock::now();
    forward();
    const double seconds = std::chrono::duration<double>(clock::now() - start).count();
    r.repetition_seconds.push_back(seconds);
    per_sample.push_back(1000.0 * seconds / static_cast<double>(n_samples));
  }
  r.total_seconds = median(r.repetition_seconds);
  r.per_sample_ms = 1000.0 * r.total_seconds / static_cast<double>(n_samples);
  r.median_per_sample_ms = median(per_sample);
  r.p95_per_sample_ms = percentile95(per_sample);
  return r;
}

}  // namespace clickbait
