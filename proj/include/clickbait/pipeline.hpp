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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clickbait/corpus.hpp"
#include "clickbait/embeddings.hpp"
#include "clickbait/eval.hpp"
#include "clickbait/features.hpp"
#include "clickbait/graph.hpp"
#include "clickbait/heuristics.hpp"
#include "clickbait/models.hpp"
#include "clickbait/pca.hpp"

namespace clickbait {

// ------------------------------------------------------- model operations
// Shared by the pipeline and the single-step CLI commands.

// Rows tagged `split`, or every row when nothing carries that tag.
std::vector<std::size_t> rows_or_all(const FeatureMatrix& features, Split split);

// Trains on the rows tagged train (all rows if untagged). Graph models need
// a graph over every row of `features`.
AnyModel train_model(ModelKind kind, const FeatureMatrix& features, const KnnGraph* graph,
                     const TrainConfig& cfg);

// Probabilities for `rows`. Graph models run one full-batch forward pass and
// read off the requested nodes.
Eigen::VectorXd score_rows(const AnyModel& model, const FeatureMatrix& features, const KnnGraph* graph,
                           const std::vector<std::size_t>& rows);

// Times the forward pass that score_rows performs on `rows` (graph operators
// are built once, outside the timed region). The per-sample figure divides
// by rows.size().
LatencyReport bench_model(const AnyModel& model, const FeatureMatrix& features, const KnnGraph* graph,
                          const std::vector<std::size_t>& rows, int repetitions, int warmup);

// Throws PreconditionError when a graph model gets no graph or a graph of
// the wrong size.
void check_graph_for(ModelKind kind, const FeatureMatrix& features, const KnnGraph* graph);

// --------------------------------------------------------- configuration

struct CorpusInput {
  std::filesystem::path path;
  Source schema = Source::kKaggle1;
};

struct PipelineConfig {
  std::uint64_t seed = 42;
  std::filesystem::path work_dir = "run";

  struct Corpus {
    std::vector<CorpusInput> inputs;     // empty: synthesize instead
    std::size_t synthetic_size = 200;
    std::size_t per_class = 0;           // 0 keeps every record
    double train_fraction = 0.8;
  } corpus;

  struct Embeddings {
    Provider provider = Provider::kSurrogate;
    std::uint64_t surrogate_seed = 0;
    std::filesystem::path cache;         // empty: no persistent cache
    bool rebuild_cache = false;
    RemoteConfig remote;
  } embeddings;

  struct Pca {
    std::size_t dim = 1000;              // capped at n_train - 1
  } pca;

  struct Features {
    FeatureMode mode = FeatureMode::kAggregate;
    bool standardize = false;
  } features;

  struct Graph {
    std::size_t k = 10;
  } graph;

  TrainConfig train;

  struct Eval {
    double threshold = 0.5;
  } eval;

  struct Bench {
    int repetitions = 10;
    int warmup = 3;
  } bench;

  // Canonical JSON: fixed key order, every field present.
  std::string to_json() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static PipelineConfig from_json(std::string_view text);
  static PipelineConfig load(const std::filesystem::path& path);
  void validate() const;
};

enum class Stage { kIngest, kEmbed, kPca, kFeatures, kGraph, kTrain, kEvaluate, kBench };

inline constexpr Stage kAllStages[] = {Stage::kIngest,   Stage::kEmbed, Stage::kPca,      Stage::kFeatures,
                                       Stage::kGraph,    Stage::kTrain, Stage::kEvaluate, Stage::kBench};

std::string_view to_string(Stage stage);
Stage stage_from_string(std::string_view name);

// Short SHA-256 over the seed and every config section that stage reads,
// including upstream sections. Changing a downstream knob leaves upstream
// hashes, and thus upstream artifacts, valid.
std::string stage_hash(const PipelineConfig& config, Stage stage);
// Hash of the whole configuration.
std::string config_hash(const PipelineConfig& config);

// File names inside the work directory.
namespace artifacts {
inline constexpr const char* kCorpus = "corpus.jsonl";
inline constexpr const char* kEmbeddings = "embeddings.bin";
inline constexpr const char* kPca = "pca.model";
inline constexpr const char* kFeatures = "features.bin";
inline constexpr const char* kGraph = "graph.jsonl";
inline constexpr const char* kSummary = "summary.json";
inline constexpr const char* kLatency = "latency.json";
std::string model_file(ModelKind kind);  // "model_<kind>.bin"
std::filesystem::path meta_path(const std::filesystem::path& artifact);
}  // namespace artifacts

// ----------------------------------------------------------------- running

struct SummaryRow {
  std::string model;
  double f1 = 0.0;
  double auc = 0.0;
  std::optional<double> per_sample_ms;
};

struct PipelineResult {
  std::vector<Stage> ran;
  std::vector<SummaryRow> rows;  // filled when evaluate and/or bench ran
};

// Runs `stages` (any subset, executed in dependency order). Each stage reads
// its inputs from the work directory and refuses, with DependencyError, to
// use an artifact that is missing or was produced under a different
// configuration; the message names the stage to run first.
PipelineResult run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages,
                            std::ostream* log = nullptr);

// Classifier | F1 | ROC-AUC | per-sample ms
std::string format_summary_table(const std::vector<SummaryRow>& rows);

// Rows from summary.json merged with latency.json when present.
std::vector<SummaryRow> read_summary(const std::filesystem::path& work_dir);

// --------------------------------------------------------------- predict

struct Prediction {
  std::string text;
  double probability = 0.0;
  int label = 0;
  HeuristicScores scores;
};

struct PredictOptions {
  std::filesystem::path pca;
  std::filesystem::path features;  // graph models only
  std::filesystem::path graph;     // graph models only
  PipelineConfig::Embeddings embeddings;
  FeatureMode mode = FeatureMode::kAggregate;
  Standardization standardization;
  double threshold = 0.5;

  // Paths and settings of a pipeline work directory.
  static PredictOptions from_pipeline(const PipelineConfig& config);
};

// Embeds, reduces and scores unseen headlines. Graph models attach the new
// nodes to the stored graph through their nearest stored neighbors.
std::vector<Prediction> predict_headlines(const AnyModel& model, const std::vector<std::string>& texts,
                                          const PredictOptions& options);

std::unique_ptr<Embedder> make_embedder(const PipelineConfig::Embeddings& settings);

}  // namespace clickbait
