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

#include "clickbait/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "clickbait/error.hpp"
#include "clickbait/hashing.hpp"
#include "clickbait/synthetic.hpp"
#include "json.hpp"

namespace clickbait {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// ---------------------------------------------------------------- models

std::vector<std::size_t> rows_or_all(const FeatureMatrix& features, Split split) {
  auto rows = features.rows_in(split);
  if (rows.empty()) {
    rows.resize(features.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  }
  return rows;
}

void check_graph_for(ModelKind kind, const FeatureMatrix& features, const KnnGraph* graph) {
  if (kind == ModelKind::kGbdt) return;
  if (graph == nullptr) throw PreconditionError(std::string(to_string(kind)) + " needs a graph");
  if (graph->size() != features.rows()) {
    throw PreconditionError("graph has " + std::to_string(graph->size()) + " nodes but the feature matrix has " +
                            std::to_string(features.rows()) + " rows");
  }
}

namespace {

RowMatrixF gather_rows(const RowMatrixF& X, const std::vector<std::size_t>& rows) {
  RowMatrixF out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = X.row(static_cast<Eigen::Index>(rows[k]));
  return out;
}

std::vector<int> gather_labels(const std::vector<int>& labels, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto r : rows) out.push_back(labels[r]);
  return out;
}

Eigen::VectorXd pick(const Eigen::VectorXd& all, const std::vector<std::size_t>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) out(static_cast<Eigen::Index>(k)) = all(static_cast<Eigen::Index>(rows[k]));
  return out;
}

void check_rows(const FeatureMatrix& features, const std::vector<std::size_t>& rows) {
  if (rows.empty()) throw PreconditionError("no rows to score");
  for (const auto r : rows) {
    if (r >= features.rows()) throw PreconditionError("row " + std::to_string(r) + " out of range");
  }
}

}  // namespace

AnyModel train_model(ModelKind kind, const FeatureMatrix& features, const KnnGraph* graph, const TrainConfig& cfg) {
  features.validate();
  check_graph_for(kind, features, graph);
  const auto train_rows = rows_or_all(features, Split::kTrain);
  switch (kind) {
    case ModelKind::kGbdt: {
      const auto labels = gather_labels(features.labels, train_rows);
      return train_gbdt(gather_rows(features.values, train_rows), labels, cfg);
    }
    case ModelKind::kGcn:
      return train_gcn(normalize_adjacency(*graph), features.values.cast<double>(), features.labels, train_rows, cfg);
    case ModelKind::kSage:
      return train_sage(*graph, features.values.cast<double>(), features.labels, train_rows, cfg);
  }
  throw PreconditionError("unknown model kind");
}

Eigen::VectorXd score_rows(const AnyModel& model, const FeatureMatrix& features, const KnnGraph* graph,
                           const std::vector<std::size_t>& rows) {
  check_rows(features, rows);
  const auto kind = kind_of(model);
  check_graph_for(kind, features, graph);
  switch (kind) {
    case ModelKind::kGbdt:
      return gbdt_predict(std::get<GbdtModel>(model), gather_rows(features.values, rows));
    case ModelKind::kGcn:
      return pick(gcn_forward(std::get<GcnModel>(model), normalize_adjacency(*graph), features.values.cast<double>()),
                  rows);
    case ModelKind::kSage:
      return sage_forward(std::get<SageModel>(model), *graph, features.values.cast<double>(), rows);
  }
  throw PreconditionError("unknown model kind");
}

LatencyReport bench_model(const AnyModel& model, const FeatureMatrix& features, const KnnGraph* graph,
                          const std::vector<std::size_t>& rows, int repetitions, int warmup) {
  check_rows(features, rows);
  const auto kind = kind_of(model);
  check_graph_for(kind, features, graph);
  volatile double sink = 0.0;
  switch (kind) {
    case ModelKind::kGbdt: {
      const RowMatrixF X = gather_rows(features.values, rows);
      const auto& m = std::get<GbdtModel>(model);
      return bench_latency([&] { sink = gbdt_predict(m, X).sum(); }, rows.size(), repetitions, warmup);
    }
    case ModelKind::kGcn: {
      const SparseMatrixD a_hat = normalize_adjacency(*graph);
      const Eigen::MatrixXd X = features.values.cast<double>();
      const auto& m = std::get<GcnModel>(model);
      return bench_latency([&] { sink = pick(gcn_forward(m, a_hat, X), rows).sum(); }, rows.size(), repetitions,
                           warmup);
    }
    case ModelKind::kSage: {
      const SparseMatrixD mean_op = mean_aggregation(*graph);
      const Eigen::MatrixXd X = features.values.cast<double>();
      const auto& m = std::get<SageModel>(model);
      return bench_latency([&] { sink = sage_forward(m, mean_op, X, rows).sum(); }, rows.size(), repetitions,
                           warmup);
    }
  }
  throw PreconditionError("unknown model kind");
}

// ---------------------------------------------------------- configuration

namespace {

ordered_json remote_to_json(const RemoteConfig& r) {
  ordered_json j;
  j["base_url"] = r.base_url;
  j["model"] = r.model;
  j["api_key_env"] = r.api_key_env;
  j["batch_size"] = r.batch_size;
  j["max_concurrency"] = r.max_concurrency;
  j["max_retries"] = r.max_retries;
  j["initial_backoff_ms"] = r.initial_backoff.count();
  j["timeout_s"] = r.timeout.count();
  j["expected_dim"] = r.expected_dim;
  return j;
}

ordered_json corpus_json(const PipelineConfig& c) {
  ordered_json inputs = ordered_json::array();
  for (const auto& in : c.corpus.inputs) {
    inputs.push_back({{"path", in.path.string()}, {"schema", std::string(to_string(in.schema))}});
  }
  ordered_json j;
  j["inputs"] = inputs;
  j["synthetic_size"] = c.corpus.synthetic_size;
  j["per_class"] = c.corpus.per_class;
  j["train_fraction"] = c.corpus.train_fraction;
  return j;
}

std::string mode_name(FeatureMode mode) { return mode == FeatureMode::kAggregate ? "aggregate" : "expanded"; }

FeatureMode mode_from_name(const std::string& name) {
  if (name == "aggregate") return FeatureMode::kAggregate;
  if (name == "expanded") return FeatureMode::kExpanded;
  throw PreconditionError("unknown feature mode '" + name + "' (expected aggregate or expanded)");
}

// Section name -> JSON, in canonical order. `for_hash` leaves out settings
// that cannot change any artifact's content.
ordered_json to_ordered(const PipelineConfig& c, bool for_hash) {
  ordered_json j;
  j["seed"] = c.seed;
  if (!for_hash) j["work_dir"] = c.work_dir.string();
  j["corpus"] = corpus_json(c);
  ordered_json emb;
  emb["provider"] = std::string(to_string(c.embeddings.provider));
  emb["surrogate_seed"] = c.embeddings.surrogate_seed;
  if (!for_hash) {
    emb["cache"] = c.embeddings.cache.string();
    emb["rebuild_cache"] = c.embeddings.rebuild_cache;
  }
  emb["remote"] = remote_to_json(c.embeddings.remote);
  j["embeddings"] = emb;
  j["pca"] = {{"dim", c.pca.dim}};
  j["features"] = {{"mode", mode_name(c.features.mode)}, {"standardize", c.features.standardize}};
  j["graph"] = {{"k", c.graph.k}};
  j["train"] = ordered_json::parse(c.train.to_json());
  j["eval"] = {{"threshold", c.eval.threshold}};
  j["bench"] = {{"repetitions", c.bench.repetitions}, {"warmup", c.bench.warmup}};
  return j;
}

template <typename F>
void for_keys(const nlohmann::json& j, const std::string& where, F&& visit) {
  if (!j.is_object()) throw PreconditionError("pipeline config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!visit(key, value)) throw PreconditionError("pipeline config: unknown key " + where + key);
  }
}

}  // namespace

std::string PipelineConfig::to_json() const { return to_ordered(*this, false).dump(2); }

PipelineConfig PipelineConfig::from_json(std::string_view text) {
  PipelineConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    for_keys(j, "", [&](const std::string& key, const nlohmann::json& v) {
      if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "work_dir") {
        c.work_dir = v.get<std::string>();
      } else if (key == "corpus") {
        for_keys(v, "corpus.", [&](const std::string& k, const nlohmann::json& x) {
          if (k == "inputs") {
            c.corpus.inputs.clear();
            for (const auto& item : x) {
              CorpusInput in;
              in.path = item.at("path").get<std::string>();
              in.schema = source_from_string(item.at("schema").get<std::string>());
              c.corpus.inputs.push_back(in);
            }
          } else if (k == "synthetic_size") {
            c.corpus.synthetic_size = x.get<std::size_t>();
          } else if (k == "per_class") {
            c.corpus.per_class = x.get<std::size_t>();
          } else if (k == "train_fraction") {
            c.corpus.train_fraction = x.get<double>();
          } else {
            return false;
          }
          return true;
        });
      } else if (key == "embeddings") {
        for_keys(v, "embeddings.", [&](const std::string& k, const nlohmann::json& x) {
          if (k == "provider") {
            c.embeddings.provider = provider_from_string(x.get<std::string>());
          } else if (k == "surrogate_seed") {
            c.embeddings.surrogate_seed = x.get<std::uint64_t>();
          } else if (k == "cache") {
            c.embeddings.cache = x.get<std::string>();
          } else if (k == "rebuild_cache") {
            c.embeddings.rebuild_cache = x.get<bool>();
          } else if (k == "remote") {
            auto& r = c.embeddings.remote;
            for_keys(x, "embeddings.remote.", [&](const std::string& rk, const nlohmann::json& rv) {
              if (rk == "base_url") {
                r.base_url = rv.get<std::string>();
              } else if (rk == "model") {
                r.model = rv.get<std::string>();
              } else if (rk == "api_key_env") {
                r.api_key_env = rv.get<std::string>();
              } else if (rk == "batch_size") {
                r.batch_size = rv.get<std::size_t>();
              } else if (rk == "max_concurrency") {
                r.max_concurrency = rv.get<std::size_t>();
              } else if (rk == "max_retries") {
                r.max_retries = rv.get<int>();
              } else if (rk == "initial_backoff_ms") {
                r.initial_backoff = std::chrono::milliseconds(rv.get<std::int64_t>());
              } else if (rk == "timeout_s") {
                r.timeout = std::chrono::seconds(rv.get<std::int64_t>());
              } else if (rk == "expected_dim") {
                r.expected_dim = rv.get<std::size_t>();
              } else {
                return false;
              }
              return true;
            });
          } else {
            return false;
          }
          return true;
        });
      } else if (key == "pca") {
        for_keys(v, "pca.", [&](const std::string& k, const nlohmann::json& x) {
          if (k != "dim") return false;
          c.pca.dim = x.get<std::size_t>();
          return true;
        });
      } else if (key == "features") {
        for_keys(v, "features.", [&](const std::string& k, const nlohmann::json& x) {
          if (k == "mode") {
            c.features.mode = mode_from_name(x.get<std::string>());
          } else if (k == "standardize") {
            c.features.standardize = x.get<bool>();
          } else {
            return false;
          }
          return true;
        });
      } else if (key == "graph") {
        for_keys(v, "graph.", [&](const std::string& k, const nlohmann::json& x) {
          if (k != "k") return false;
          c.graph.k = x.get<std::size_t>();
          return true;
        });
      } else if (key == "train") {
        c.train = TrainConfig::from_json(v.dump());
      } else if (key == "eval") {
        for_keys(v, "eval.", [&](const std::string& k, const nlohmann::json& x) {
          if (k != "threshold") return false;
          c.eval.threshold = x.get<double>();
          return true;
        });
      } else if (key == "bench") {
        for_keys(v, "bench.", [&](const std::string& k, const nlohmann::json& x) {
          if (k == "repetitions") {
            c.bench.repetitions = x.get<int>();
          } else if (k == "warmup") {
            c.bench.warmup = x.get<int>();
          } else {
            return false;
          }
          return true;
        });
      } else {
        return false;
      }
      return true;
    });
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("pipeline config: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& what) { throw PreconditionError("pipeline config: " + what); };
  for (const auto& in : corpus.inputs) {
    if (!fs::is_regular_file(in.path)) fail("corpus input " + in.path.string() + " does not exist");
    if (in.schema == Source::kSynthetic) fail("corpus input schema must be KAGGLE1, KAGGLE2 or CC17");
  }
  if (corpus.inputs.empty() && corpus.synthetic_size < 4) fail("corpus.synthetic_size must be >= 4");
  if (!(corpus.train_fraction > 0.0 && corpus.train_fraction < 1.0)) fail("corpus.train_fraction must be in (0, 1)");
  if (embeddings.provider == Provider::kRemote) {
    const auto& r = embeddings.remote;
    if (r.batch_size == 0 || r.max_concurrency == 0) fail("embeddings.remote batch_size and max_concurrency must be > 0");
    if (r.max_retries < 0) fail("embeddings.remote.max_retries must be >= 0");
    if (r.expected_dim != kEmbeddingDim) fail("embeddings.remote.expected_dim must be " + std::to_string(kEmbeddingDim));
  }
  if (!embeddings.cache.empty() && embeddings.cache.has_parent_path() &&
      !fs::is_directory(embeddings.cache.parent_path())) {
    fail("embedding cache directory " + embeddings.cache.parent_path().string() + " does not exist");
  }
  if (pca.dim < 1) fail("pca.dim must be >= 1");
  if (graph.k < 1) fail("graph.k must be >= 1");
  train.validate();
  if (!std::isfinite(eval.threshold)) fail("eval.threshold must be finite");
  if (bench.repetitions < 1) fail("bench.repetitions must be >= 1");
  if (bench.warmup < 0) fail("bench.warmup must be >= 0");
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kIngest: return "ingest";
    case Stage::kEmbed: return "embed";
    case Stage::kPca: return "pca";
    case Stage::kFeatures: return "features";
    case Stage::kGraph: return "graph";
    case Stage::kTrain: return "train";
    case Stage::kEvaluate: return "evaluate";
    case Stage::kBench: return "bench";
  }
  return "unknown";
}

Stage stage_from_string(std::string_view name) {
  for (const auto s : kAllStages) {
    if (to_string(s) == name) return s;
  }
  throw PreconditionError("unknown stage '" + std::string(name) +
                          "' (expected ingest, embed, pca, features, graph, train, evaluate or bench)");
}

std::string stage_hash(const PipelineConfig& config, Stage stage) {
  static constexpr const char* kSections[] = {"corpus", "embeddings", "pca", "features",
                                              "graph",  "train",      "eval", "bench"};
  const auto full = to_ordered(config, true);
  ordered_json scoped;
  scoped["seed"] = full["seed"];
  for (int s = 0; s <= static_cast<int>(stage); ++s) {
    // Bench measures trained models and does not depend on evaluation.
    if (stage == Stage::kBench && s == static_cast<int>(Stage::kEvaluate)) continue;
    scoped[kSections[s]] = full[kSections[s]];
  }
  return short_hash(scoped.dump());
}

std::string config_hash(const PipelineConfig& config) { return short_hash(to_ordered(config, true).dump()); }

std::string artifacts::model_file(ModelKind kind) { return "model_" + std::string(to_string(kind)) + ".bin"; }

fs::path artifacts::meta_path(const fs::path& artifact) { return fs::path(artifact.string() + ".meta.json"); }

// ------------------------------------------------------------------ stages

namespace {

constexpr ModelKind kModels[] = {ModelKind::kGbdt, ModelKind::kGcn, ModelKind::kSage};

std::string display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGbdt: return "GBDT";
    case ModelKind::kGcn: return "GCN";
    case ModelKind::kSage: return "GraphSAGE";
  }
  return "?";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

ordered_json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

class Run {
 public:
  Run(const PipelineConfig& config, std::ostream* log) : cfg_(config), log_(log), dir_(config.work_dir) {}

  void stage(Stage s) {
    note("[" + std::string(to_string(s)) + "]");
    switch (s) {
      case Stage::kIngest: ingest(); break;
      case Stage::kEmbed: embed(); break;
      case Stage::kPca: pca(); break;
      case Stage::kFeatures: features(); break;
      case Stage::kGraph: graph(); break;
      case Stage::kTrain: train(); break;
      case Stage::kEvaluate: evaluate(); break;
      case Stage::kBench: bench(); break;
    }
  }

 private:
  fs::path at(const std::string& name) const { return dir_ / name; }

  void note(const std::string& msg) const {
    if (log_) *log_ << msg << '\n';
  }

  void stamp(const fs::path& artifact, Stage producer, ordered_json extra = ordered_json::object()) const {
    ordered_json meta;
    meta["stage"] = std::string(to_string(producer));
    meta["config_hash"] = stage_hash(cfg_, producer);
    meta["seed"] = cfg_.seed;
    for (auto& [k, v] : extra.items()) meta[k] = v;
    meta["config"] = to_ordered(cfg_, true);
    write_text(artifacts::meta_path(artifact), meta.dump(2) + "\n");
  }

  // Returns the artifact's metadata after checking it belongs to this run.
  ordered_json require(const fs::path& artifact, Stage producer) const {
    const std::string stage_name(to_string(producer));
    if (!fs::exists(artifact)) {
      throw DependencyError(artifact.string() + " is missing; run stage '" + stage_name + "' first");
    }
    const auto meta_file = artifacts::meta_path(artifact);
    if (!fs::exists(meta_file)) {
      throw DependencyError(artifact.string() + " has no provenance record; rerun stage '" + stage_name + "'");
    }
    auto meta = read_json(meta_file);
    const auto expected = stage_hash(cfg_, producer);
    const auto found = meta.value("config_hash", std::string());
    if (found != expected) {
      throw DependencyError(artifact.string() + " was produced under a different configuration (hash " + found +
                            ", expected " + expected + "); rerun stage '" + stage_name + "'");
    }
    return meta;
  }

  void ingest() {
    fs::create_directories(dir_);
    LabeledCorpus corpus;
    if (cfg_.corpus.inputs.empty()) {
      corpus = synthesize_corpus(cfg_.corpus.synthetic_size, cfg_.seed);
      note("synthesized " + std::to_string(corpus.size()) + " headlines");
    } else {
      std::vector<std::vector<HeadlineRecord>> parts;
      for (const auto& in : cfg_.corpus.inputs) {
        auto parsed = parse_source(in.path, in.schema);
        note(in.path.string() + ": " + std::to_string(parsed.records.size()) + " records, " +
             std::to_string(parsed.errors.size()) + " rejected rows");
        parts.push_back(std::move(parsed.records));
      }
      auto merged = merge_dedupe_records(parts);
      note("merged " + std::to_string(merged.corpus.size()) + " records (" + std::to_string(merged.duplicates) +
           " duplicates, " + std::to_string(merged.conflicts) + " label conflicts dropped)");
      corpus = LabeledCorpus(merged.corpus.records(), cfg_.seed);
    }
    if (cfg_.corpus.per_class > 0) corpus = balanced_sample(corpus, cfg_.corpus.per_class, cfg_.seed);
    const auto split = stratified_split(corpus, cfg_.corpus.train_fraction, cfg_.seed);
    note("split " + std::to_string(split.train.size()) + " train / " + std::to_string(split.test.size()) + " test");
    const auto path = at(artifacts::kCorpus);
    write_jsonl(path, tag_splits(split).records());
    stamp(path, Stage::kIngest);
  }

  void embed() {
    const auto corpus_path = at(artifacts::kCorpus);
    require(corpus_path, Stage::kIngest);
    const auto records = read_jsonl(corpus_path);
    std::vector<std::string> texts;
    for (const auto& r : records) texts.push_back(r.text);

    auto embedder = make_embedder(cfg_.embeddings);
    std::vector<EmbeddingVector> vectors;
    if (!cfg_.embeddings.cache.empty()) {
      EmbeddingCache cache(cfg_.embeddings.cache, cfg_.embeddings.rebuild_cache);
      auto looked = lookup_or_embed(texts, *embedder, cache);
      note("embedding cache: " + std::to_string(looked.hits) + " hits, " + std::to_string(looked.misses) + " misses");
      vectors = std::move(looked.vectors);
    } else {
      vectors = embedder->embed(texts);
    }

    FeatureMatrix emb;
    emb.values.resize(static_cast<Eigen::Index>(records.size()), static_cast<Eigen::Index>(kEmbeddingDim));
    for (std::size_t i = 0; i < records.size(); ++i) {
      check_embedding(vectors[i].values);
      emb.values.row(static_cast<Eigen::Index>(i)) =
          Eigen::Map<const Eigen::RowVectorXf>(vectors[i].values.data(), static_cast<Eigen::Index>(kEmbeddingDim));
      emb.labels.push_back(records[i].label);
      emb.ids.push_back(records[i].id);
      emb.splits.push_back(records[i].split);
    }
    const auto path = at(artifacts::kEmbeddings);
    save_features(path, emb);
    stamp(path, Stage::kEmbed, {{"provider", std::string(to_string(embedder->provider()))}, {"tag", embedder->tag()}});
    note("embedded " + std::to_string(records.size()) + " headlines with " + embedder->tag());
  }

  void pca() {
    const auto emb_path = at(artifacts::kEmbeddings);
    require(emb_path, Stage::kEmbed);
    const auto emb = load_features(emb_path);
    const auto train_rows = rows_or_all(emb, Split::kTrain);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(train_rows.size()), emb.dim());
    for (std::size_t k = 0; k < train_rows.size(); ++k) {
      X.row(static_cast<Eigen::Index>(k)) = emb.values.row(static_cast<Eigen::Index>(train_rows[k])).cast<double>();
    }
    const auto cap = std::min<std::size_t>(train_rows.size() - 1, static_cast<std::size_t>(emb.dim()));
    const auto dim = std::min(cfg_.pca.dim, cap);
    if (dim < cfg_.pca.dim) {
      note("pca.dim " + std::to_string(cfg_.pca.dim) + " exceeds the rank bound of " +
           std::to_string(train_rows.size()) + " training rows; using " + std::to_string(dim));
    }
    const auto model = pca_fit(X, static_cast<Eigen::Index>(dim));
    const auto path = at(artifacts::kPca);
    save_pca(path, model);
    stamp(path, Stage::kPca,
          {{"requested_dim", cfg_.pca.dim},
           {"dim", dim},
           {"fit_rows", train_rows.size()},
           {"explained_variance", model.explained_variance_ratio.sum()}});
    note("pca " + std::to_string(emb.dim()) + " -> " + std::to_string(dim) + " dims, fit on " +
         std::to_string(train_rows.size()) + " training rows");
  }

  void features() {
    const auto corpus_path = at(artifacts::kCorpus);
    const auto emb_path = at(artifacts::kEmbeddings);
    const auto pca_path = at(artifacts::kPca);
    require(corpus_path, Stage::kIngest);
    require(emb_path, Stage::kEmbed);
    require(pca_path, Stage::kPca);
    const auto records = read_jsonl(corpus_path);
    const auto emb = load_features(emb_path);
    if (emb.ids.size() != records.size()) throw FormatError("embeddings and corpus disagree in length");
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (emb.ids[i] != records[i].id) throw FormatError("embedding row " + std::to_string(i) + " is not " + records[i].id);
    }
    const auto model = load_pca(pca_path);
    const RowMatrixF reduced = pca_transform(model, emb.values.cast<double>()).cast<float>();
    auto fm = build_feature_matrix(reduced, records, HeuristicConfig::defaults(), cfg_.features.mode);
    ordered_json extra = ordered_json::object();
    if (cfg_.features.standardize) {
      const auto heuristic_cols = hybrid_dim(0, cfg_.features.mode);
      const auto stats = standardize_embedding_block(fm, heuristic_cols);
      extra["standardization"] = {{"mean", stats.mean}, {"scale", stats.scale}};
    }
    const auto path = at(artifacts::kFeatures);
    save_features(path, fm);
    stamp(path, Stage::kFeatures, extra);
    note("features " + std::to_string(fm.rows()) + " x " + std::to_string(fm.dim()));
  }

  void graph() {
    const auto feat_path = at(artifacts::kFeatures);
    require(feat_path, Stage::kFeatures);
    const auto fm = load_features(feat_path);
    const auto g = build_knn_graph(fm, cfg_.graph.k);
    const auto path = at(artifacts::kGraph);
    save_graph(path, g);
    stamp(path, Stage::kGraph, {{"edges", g.edge_count()}});
    note("graph " + std::to_string(g.size()) + " nodes, " + std::to_string(g.edge_count()) + " edges, k=" +
         std::to_string(cfg_.graph.k));
  }

  std::pair<FeatureMatrix, KnnGraph> load_inputs() const {
    const auto feat_path = at(artifacts::kFeatures);
    const auto graph_path = at(artifacts::kGraph);
    require(feat_path, Stage::kFeatures);
    require(graph_path, Stage::kGraph);
    return {load_features(feat_path), load_graph(graph_path)};
  }

  void train() {
    const auto [fm, g] = load_inputs();
    for (const auto kind : kModels) {
      const auto model = train_model(kind, fm, &g, cfg_.train);
      const auto path = at(artifacts::model_file(kind));
      save_model(path, model, to_ordered(cfg_, true).dump());
      const auto& history = std::visit([](const auto& m) -> const std::vector<double>& { return m.loss_history; }, model);
      stamp(path, Stage::kTrain, {{"model", std::string(to_string(kind))}, {"final_loss", history.empty() ? 0.0 : history.back()}});
      char buf[128];
      std::snprintf(buf, sizeof buf, "trained %s, final training loss %.6f", display_name(kind).c_str(),
                    history.empty() ? 0.0 : history.back());
      note(buf);
    }
  }

  AnyModel load_trained(ModelKind kind) const {
    const auto path = at(artifacts::model_file(kind));
    require(path, Stage::kTrain);
    return load_model(path).model;
  }

  void evaluate() {
    const auto [fm, g] = load_inputs();
    std::vector<AnyModel> models;
    for (const auto kind : kModels) models.push_back(load_trained(kind));
    const auto test_rows = rows_or_all(fm, Split::kTest);
    const auto labels = gather_labels(fm.labels, test_rows);

    ordered_json summary;
    summary["config_hash"] = stage_hash(cfg_, Stage::kEvaluate);
    summary["train_hash"] = stage_hash(cfg_, Stage::kTrain);
    summary["seed"] = cfg_.seed;
    summary["n_train"] = fm.rows_in(Split::kTrain).size();
    summary["n_test"] = test_rows.size();
    summary["threshold"] = cfg_.eval.threshold;
    summary["models"] = ordered_json::array();
    for (std::size_t m = 0; m < models.size(); ++m) {
      const auto kind = kModels[m];
      const Eigen::VectorXd scores = score_rows(models[m], fm, &g, test_rows);
      const std::vector<double> s(scores.data(), scores.data() + scores.size());
      const auto report = evaluate_scores(std::string(to_string(kind)), labels, s, cfg_.eval.threshold);
      const auto roc = roc_and_auc(labels, s);
      const auto json_path = at("eval_" + std::string(to_string(kind)) + ".json");
      const auto roc_path = at("roc_" + std::string(to_string(kind)) + ".csv");
      write_text(json_path, report.to_json() + "\n");
      write_text(roc_path, roc_to_csv(roc.curve));
      stamp(json_path, Stage::kEvaluate);
      stamp(roc_path, Stage::kEvaluate);
      summary["models"].push_back({{"model", std::string(to_string(kind))},
                                   {"f1", report.f1},
                                   {"auc", report.auc},
                                   {"precision", report.precision},
                                   {"recall", report.recall}});
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: F1 %.4f, ROC-AUC %.4f on %zu test headlines", display_name(kind).c_str(),
                    report.f1, report.auc, test_rows.size());
      note(buf);
    }
    write_text(at(artifacts::kSummary), summary.dump(2) + "\n");
  }

  void bench() {
    const auto [fm, g] = load_inputs();
    const auto test_rows = rows_or_all(fm, Split::kTest);
    ordered_json out;
    out["config_hash"] = stage_hash(cfg_, Stage::kBench);
    out["train_hash"] = stage_hash(cfg_, Stage::kTrain);
    out["n_samples"] = test_rows.size();
    out["models"] = ordered_json::array();
    for (const auto kind : kModels) {
      const auto model = load_trained(kind);
      const auto report = bench_model(model, fm, &g, test_rows, cfg_.bench.repetitions, cfg_.bench.warmup);
      auto j = ordered_json::parse(report.to_json());
      j["model"] = std::string(to_string(kind));
      out["models"].push_back(j);
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: %.6f ms per sample (median of %d passes over %zu headlines)",
                    display_name(kind).c_str(), report.per_sample_ms, report.repetitions, report.n_samples);
      note(buf);
    }
    write_text(at(artifacts::kLatency), out.dump(2) + "\n");
  }

  const PipelineConfig& cfg_;
  std::ostream* log_;
  fs::path dir_;
};

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages, std::ostream* log) {
  config.validate();
  auto ordered = stages;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  PipelineResult result;
  Run run(config, log);
  for (const auto s : ordered) {
    run.stage(s);
    result.ran.push_back(s);
  }
  if (fs::exists(config.work_dir / artifacts::kSummary)) result.rows = read_summary(config.work_dir);
  return result;
}

std::vector<SummaryRow> read_summary(const fs::path& work_dir) {
  const auto summary = read_json(work_dir / artifacts::kSummary);
  std::vector<SummaryRow> rows;
  for (const auto& m : summary.at("models")) {
    rows.push_back({m.at("model").get<std::string>(), m.at("f1").get<double>(), m.at("auc").get<double>(), {}});
  }
  const auto latency_path = work_dir / artifacts::kLatency;
  if (fs::exists(latency_path)) {
    const auto latency = read_json(latency_path);
    if (latency.value("train_hash", std::string()) == summary.value("train_hash", std::string())) {
      for (const auto& m : latency.at("models")) {
        for (auto& row : rows) {
          if (row.model == m.at("model").get<std::string>()) row.per_sample_ms = m.at("per_sample_ms").get<double>();
        }
      }
    }
  }
  return rows;
}

std::string format_summary_table(const std::vector<SummaryRow>& rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %8s %9s %15s\n", "Classifier", "F1", "ROC-AUC", "ms per sample");
  out += buf;
  for (const auto& r : rows) {
    const auto name = display_name(model_kind_from_string(r.model));
    if (r.per_sample_ms) {
      std::snprintf(buf, sizeof buf, "%-12s %8.4f %9.4f %15.6f\n", name.c_str(), r.f1, r.auc, *r.per_sample_ms);
    } else {
      std::snprintf(buf, sizeof buf, "%-12s %8.4f %9.4f %15s\n", name.c_str(), r.f1, r.auc, "n/a");
    }
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------- predict

std::unique_ptr<Embedder> make_embedder(const PipelineConfig::Embeddings& settings) {
  if (settings.provider == Provider::kRemote) return std::make_unique<RemoteEmbedder>(settings.remote);
  return std::make_unique<SurrogateEmbedder>(settings.surrogate_seed);
}

PredictOptions PredictOptions::from_pipeline(const PipelineConfig& config) {
  PredictOptions o;
  o.pca = config.work_dir / artifacts::kPca;
  o.features = config.work_dir / artifacts::kFeatures;
  o.graph = config.work_dir / artifacts::kGraph;
  o.embeddings = config.embeddings;
  o.mode = config.features.mode;
  o.threshold = config.eval.threshold;
  const auto meta = artifacts::meta_path(o.features);
  if (config.features.standardize && fs::exists(meta)) {
    const auto j = read_json(meta);
    if (j.contains("standardization")) {
      o.standardization.mean = j["standardization"].at("mean").get<std::vector<double>>();
      o.standardization.scale = j["standardization"].at("scale").get<std::vector<double>>();
    }
  }
  return o;
}

std::vector<Prediction> predict_headlines(const AnyModel& model, const std::vector<std::string>& texts,
                                          const PredictOptions& options) {
  if (texts.empty()) return {};
  for (const auto& t : texts) {
    if (trim(t).empty()) throw PreconditionError("cannot score an empty headline");
  }
  auto embedder = make_embedder(options.embeddings);
  std::vector<EmbeddingVector> vectors;
  if (!options.embeddings.cache.empty()) {
    EmbeddingCache cache(options.embeddings.cache, options.embeddings.rebuild_cache);
    vectors = lookup_or_embed(texts, *embedder, cache).vectors;
  } else {
    vectors = embedder->embed(texts);
  }
  const auto pca = load_pca(options.pca);
  const auto m = static_cast<Eigen::Index>(texts.size());
  Eigen::MatrixXd E(m, pca.input_dim());
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& v = vectors[static_cast<std::size_t>(i)].values;
    if (static_cast<Eigen::Index>(v.size()) != pca.input_dim()) {
      throw PreconditionError("embedding has " + std::to_string(v.size()) + " dims but the PCA model expects " +
                              std::to_string(pca.input_dim()));
    }
    E.row(i) = Eigen::Map<const Eigen::RowVectorXf>(v.data(), static_cast<Eigen::Index>(v.size())).cast<double>();
  }
  const RowMatrixF reduced = pca_transform(pca, E).cast<float>();

  std::vector<Prediction> out(texts.size());
  RowMatrixF extra;
  for (Eigen::Index i = 0; i < m; ++i) {
    auto& p = out[static_cast<std::size_t>(i)];
    p.text = texts[static_cast<std::size_t>(i)];
    p.scores = score_headline(p.text, HeuristicConfig::defaults());
    auto x = assemble(std::span(reduced.row(i).data(), static_cast<std::size_t>(reduced.cols())), p.scores, options.mode);
    if (!options.standardization.empty()) options.standardization.apply(x);
    if (extra.size() == 0) extra.resize(m, static_cast<Eigen::Index>(x.size()));
    extra.row(i) = Eigen::Map<const Eigen::RowVectorXf>(x.data(), static_cast<Eigen::Index>(x.size()));
  }

  Eigen::VectorXd probs;
  const auto kind = kind_of(model);
  if (kind == ModelKind::kGbdt) {
    probs = gbdt_predict(std::get<GbdtModel>(model), extra);
  } else {
    const auto base = load_features(options.features);
    const auto g = load_graph(options.graph);
    if (g.size() != base.rows()) throw FormatError("stored graph and feature matrix disagree in size");
    if (base.dim() != extra.cols()) {
      throw PreconditionError("new features have " + std::to_string(extra.cols()) + " dims, stored ones " +
                              std::to_string(base.dim()));
    }
    const auto joined = attach_nodes(g, base.values, extra);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(joined.size()), base.dim());
    X.topRows(base.values.rows()) = base.values.cast<double>();
    X.bottomRows(m) = extra.cast<double>();
    std::vector<std::size_t> targets;
    for (Eigen::Index i = 0; i < m; ++i) targets.push_back(base.rows() + static_cast<std::size_t>(i));
    if (kind == ModelKind::kGcn) {
      probs = pick(gcn_forward(std::get<GcnModel>(model), normalize_adjacency(joined), X), targets);
    } else {
      probs = sage_forward(std::get<SageModel>(model), joined, X, targets);
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    auto& p = out[static_cast<std::size_t>(i)];
    p.probability = probs(i);
    p.label = p.probability >= options.threshold ? 1 : 0;
  }
  return out;
}

}  // namespace clickbait
