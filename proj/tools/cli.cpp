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

#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "clickbait/corpus.hpp"
#include "clickbait/embeddings.hpp"
#include "clickbait/error.hpp"
#include "clickbait/eval.hpp"
#include "clickbait/features.hpp"
#include "clickbait/graph.hpp"
#include "clickbait/heuristics.hpp"
#include "clickbait/models.hpp"
#include "clickbait/pca.hpp"
#include "clickbait/pipeline.hpp"
#include "clickbait/synthetic.hpp"
#include "json.hpp"

namespace clickbait::cli {

namespace fs = std::filesystem;

struct Settings {
  std::ostream* out = &std::cout;
  std::ostream* err = &std::cerr;

  // corpus
  std::string schema = "k1";
  std::string in;
  std::vector<std::string> inputs;
  std::string out_path;
  std::size_t synth_n = 200;
  std::uint64_t seed = 42;
  std::size_t per_class = 0;
  double train_frac = 0.8;

  // score
  std::vector<std::string> texts;
  std::string bait_phrases = "builtin";
  std::string vague_words = "builtin";
  std::string valence = "builtin";
  std::string function_words = "builtin";

  // embed
  std::string provider = "surrogate";
  std::uint64_t surrogate_seed = 0;
  std::string cache = "none";
  bool rebuild_cache = false;
  RemoteConfig remote;
  std::size_t backoff_ms = 500;
  std::size_t timeout_s = 60;

  // pca
  std::size_t pca_dim = 1000;
  bool all_rows = false;
  std::string pca_model;
  std::uint64_t mem_rows = 40000;
  std::uint64_t mem_dim = 3072;
  std::uint64_t mem_bytes = 4;

  // features / graph
  std::string corpus;
  std::string reduced;
  std::string mode = "aggregate";
  bool standardize = false;
  std::string features;
  std::size_t k = 10;
  unsigned threads = 0;
  std::string graph = "none";

  // train / evaluate / bench / predict
  std::string model_kind = "gbdt";
  std::string model_path;
  std::string train_config = "none";
  std::uint64_t train_seed = 42;
  int epochs = 50;
  double learning_rate = 0.01;
  int hidden = 64;
  int rounds = 200;
  int max_depth = 4;
  double gbdt_lr = 0.1;
  double threshold = 0.5;
  std::string rows = "test";
  std::string roc_path = "none";
  int repetitions = 10;
  int warmup = 3;
  std::string work_dir = "model-dir";

  // pipeline
  std::string pipeline_config = "none";
  std::string pipeline_dir = "config";
  std::string stages = "all";
  std::size_t synthetic_size = 0;
  bool print_config = false;
};

namespace {

bool given(const std::string& value) { return !value.empty() && value != "none" && value != "builtin"; }

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

HeuristicConfig heuristics_from(const Settings& s) {
  if (!given(s.bait_phrases) && !given(s.vague_words) && !given(s.valence) && !given(s.function_words)) {
    return HeuristicConfig::defaults();
  }
  auto path = [](const std::string& v) { return given(v) ? fs::path(v) : fs::path(); };
  return HeuristicConfig::from_files(path(s.bait_phrases), path(s.vague_words), path(s.valence),
                                     path(s.function_words));
}

PipelineConfig::Embeddings embeddings_from(const Settings& s) {
  PipelineConfig::Embeddings e;
  e.provider = provider_from_string(s.provider);
  e.surrogate_seed = s.surrogate_seed;
  if (given(s.cache)) e.cache = s.cache;
  e.rebuild_cache = s.rebuild_cache;
  e.remote = s.remote;
  e.remote.initial_backoff = std::chrono::milliseconds(s.backoff_ms);
  e.remote.timeout = std::chrono::seconds(s.timeout_s);
  return e;
}

TrainConfig train_config_from(const Settings& s, const CLI::App& cmd) {
  TrainConfig cfg = given(s.train_config) ? TrainConfig::from_json(read_file(s.train_config)) : TrainConfig{};
  // Flags given explicitly override the file.
  if (cmd.count("--seed")) cfg.seed = s.train_seed;
  if (cmd.count("--epochs")) cfg.epochs = s.epochs;
  if (cmd.count("--learning-rate")) cfg.learning_rate = s.learning_rate;
  if (cmd.count("--hidden")) cfg.hidden_dim = s.hidden;
  if (cmd.count("--rounds")) cfg.gbdt.rounds = s.rounds;
  if (cmd.count("--max-depth")) cfg.gbdt.max_depth = s.max_depth;
  if (cmd.count("--gbdt-learning-rate")) cfg.gbdt.learning_rate = s.gbdt_lr;
  cfg.validate();
  return cfg;
}

std::optional<KnnGraph> graph_if_needed(const Settings& s, ModelKind kind) {
  if (kind == ModelKind::kGbdt) return std::nullopt;
  if (!given(s.graph)) throw PreconditionError(std::string(to_string(kind)) + " needs --graph");
  return load_graph(s.graph);
}

std::vector<std::size_t> rows_for(const FeatureMatrix& fm, const std::string& which) {
  if (which == "all") {
    std::vector<std::size_t> r(fm.rows());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = i;
    return r;
  }
  if (which == "test") return rows_or_all(fm, Split::kTest);
  if (which == "train") return rows_or_all(fm, Split::kTrain);
  throw PreconditionError("--rows must be test, train or all");
}

FeatureMode mode_from(const std::string& name) {
  if (name == "aggregate") return FeatureMode::kAggregate;
  if (name == "expanded") return FeatureMode::kExpanded;
  throw PreconditionError("--mode must be aggregate or expanded");
}

std::vector<Stage> stages_from(const std::string& list) {
  if (list == "all") return {std::begin(kAllStages), std::end(kAllStages)};
  std::vector<Stage> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(stage_from_string(std::string(trim(item))));
  }
  if (out.empty()) throw PreconditionError("--stages is empty");
  return out;
}

void print_stats(std::ostream& err, const std::string& what, std::size_t n, const std::vector<RowError>& errors) {
  err << what << ": " << n << " records";
  if (!errors.empty()) err << ", " << errors.size() << " rejected rows";
  err << '\n';
  for (std::size_t i = 0; i < errors.size() && i < 10; ++i) {
    err << "  line " << errors[i].line << ": " << errors[i].message << '\n';
  }
}

// ------------------------------------------------------------- commands

void cmd_ingest(Settings& s) {
  const auto parsed = parse_source(s.in, source_from_string(s.schema));
  print_stats(*s.err, s.in, parsed.records.size(), parsed.errors);
  const auto merged = merge_dedupe_records({parsed.records});
  if (merged.duplicates + merged.conflicts > 0) {
    *s.err << "dropped " << merged.duplicates << " duplicates and " << merged.conflicts << " label conflicts\n";
  }
  write_jsonl(s.out_path, merged.corpus.records());
}

void cmd_synth(Settings& s) {
  const auto corpus = synthesize_corpus(s.synth_n, s.seed);
  write_jsonl(s.out_path, corpus.records());
  *s.err << "wrote " << corpus.size() << " synthetic headlines to " << s.out_path << '\n';
}

void cmd_merge(Settings& s) {
  std::vector<std::vector<HeadlineRecord>> parts;
  for (const auto& p : s.inputs) parts.push_back(read_jsonl(p));
  const auto merged = merge_dedupe_records(parts);
  *s.err << "merged " << merged.corpus.size() << " records (" << merged.duplicates << " duplicates, "
         << merged.conflicts << " label conflicts dropped)\n";
  write_jsonl(s.out_path, merged.corpus.records());
}

void cmd_sample(Settings& s) {
  const LabeledCorpus corpus(read_jsonl(s.in), s.seed);
  const auto sampled = balanced_sample(corpus, s.per_class, s.seed);
  write_jsonl(s.out_path, sampled.records());
}

void cmd_split(Settings& s) {
  const LabeledCorpus corpus(read_jsonl(s.in), s.seed);
  const auto split = stratified_split(corpus, s.train_frac, s.seed);
  *s.err << split.train.size() << " train / " << split.test.size() << " test\n";
  write_jsonl(s.out_path, tag_splits(split).records());
}

void cmd_score(Settings& s) {
  const auto config = heuristics_from(s);
  std::vector<std::pair<std::string, std::string>> items;  // id, text
  for (std::size_t i = 0; i < s.texts.size(); ++i) items.emplace_back("text-" + std::to_string(i), s.texts[i]);
  if (!s.in.empty()) {
    for (const auto& r : read_jsonl(s.in)) items.emplace_back(r.id, r.text);
  }
  if (items.empty()) throw PreconditionError("score needs --text or --in");
  std::string text;
  for (const auto& [id, headline] : items) {
    auto j = nlohmann::ordered_json::parse(scores_to_json(score_headline(headline, config)));
    nlohmann::ordered_json line;
    line["id"] = id;
    line["text"] = headline;
    for (auto& [k, v] : j.items()) line[k] = v;
    text += line.dump() + "\n";
  }
  write_text(s.out_path, text, *s.out);
}

void cmd_embed(Settings& s) {
  const auto records = read_jsonl(s.in);
  std::vector<std::string> texts;
  for (const auto& r : records) texts.push_back(r.text);
  const auto settings = embeddings_from(s);
  auto embedder = make_embedder(settings);
  std::vector<EmbeddingVector> vectors;
  if (!settings.cache.empty()) {
    EmbeddingCache cache(settings.cache, settings.rebuild_cache);
    auto looked = lookup_or_embed(texts, *embedder, cache);
    *s.err << "cache: " << looked.hits << " hits, " << looked.misses << " misses\n";
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
  save_features(s.out_path, emb);
  *s.err << "embedded " << records.size() << " headlines with " << embedder->tag() << '\n';
}

void cmd_pca_fit(Settings& s) {
  const auto emb = load_features(s.in);
  const auto rows = s.all_rows ? rows_for(emb, "all") : rows_or_all(emb, Split::kTrain);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), emb.dim());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    X.row(static_cast<Eigen::Index>(k)) = emb.values.row(static_cast<Eigen::Index>(rows[k])).cast<double>();
  }
  const auto model = pca_fit(X, static_cast<Eigen::Index>(s.pca_dim));
  save_pca(s.out_path, model);
  char buf[160];
  std::snprintf(buf, sizeof buf, "fit on %zu rows: %ld -> %zu dims, %.4f of variance retained\n", rows.size(),
                static_cast<long>(emb.dim()), s.pca_dim, model.explained_variance_ratio.sum());
  *s.err << buf;
}

void cmd_pca_transform(Settings& s) {
  const auto model = load_pca(s.pca_model);
  auto emb = load_features(s.in);
  if (emb.dim() != model.input_dim()) {
    throw PreconditionError("matrix has " + std::to_string(emb.dim()) + " columns, model expects " +
                            std::to_string(model.input_dim()));
  }
  FeatureMatrix out;
  out.values = pca_transform(model, emb.values.cast<double>()).cast<float>();
  out.labels = std::move(emb.labels);
  out.ids = std::move(emb.ids);
  out.splits = std::move(emb.splits);
  save_features(s.out_path, out);
}

void cmd_pca_memory(Settings& s) {
  *s.out << memory_footprint(s.mem_rows, s.mem_dim, s.mem_bytes).describe() << '\n';
}

void cmd_features(Settings& s) {
  const auto records = read_jsonl(s.corpus);
  const auto reduced = load_features(s.reduced);
  if (reduced.ids.size() != records.size()) throw PreconditionError("corpus and reduced matrix differ in length");
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (reduced.ids[i] != records[i].id) {
      throw PreconditionError("row " + std::to_string(i) + ": corpus id " + records[i].id + " vs matrix id " +
                              reduced.ids[i]);
    }
  }
  const auto mode = mode_from(s.mode);
  auto fm = build_feature_matrix(reduced.values, records, heuristics_from(s), mode);
  if (s.standardize) {
    const auto stats = standardize_embedding_block(fm, hybrid_dim(0, mode));
    nlohmann::ordered_json j = {{"mean", stats.mean}, {"scale", stats.scale}};
    write_text(s.out_path + ".standardization.json", j.dump() + "\n", *s.out);
  }
  save_features(s.out_path, fm);
  *s.err << "features: " << fm.rows() << " x " << fm.dim() << '\n';
}

void cmd_graph(Settings& s) {
  const auto fm = load_features(s.features);
  const auto g = build_knn_graph(fm, s.k, s.threads);
  save_graph(s.out_path, g);
  *s.err << "graph: " << g.size() << " nodes, " << g.edge_count() << " edges\n";
}

void cmd_train(Settings& s, const CLI::App& cmd) {
  const auto kind = model_kind_from_string(s.model_kind);
  const auto cfg = train_config_from(s, cmd);
  const auto fm = load_features(s.features);
  const auto g = graph_if_needed(s, kind);
  const auto model = train_model(kind, fm, g ? &*g : nullptr, cfg);
  save_model(s.out_path, model, cfg.to_json());
  const auto& history = std::visit([](const auto& m) -> const std::vector<double>& { return m.loss_history; }, model);
  char buf[128];
  std::snprintf(buf, sizeof buf, "trained %s, final training loss %.6f\n", std::string(to_string(kind)).c_str(),
                history.empty() ? 0.0 : history.back());
  *s.err << buf;
}

void cmd_evaluate(Settings& s) {
  const auto artifact = load_model(s.model_path);
  const auto kind = kind_of(artifact.model);
  const auto fm = load_features(s.features);
  const auto g = graph_if_needed(s, kind);
  const auto rows = rows_for(fm, s.rows);
  const auto scores = score_rows(artifact.model, fm, g ? &*g : nullptr, rows);
  std::vector<int> labels;
  for (const auto r : rows) labels.push_back(fm.labels[r]);
  const std::vector<double> sv(scores.data(), scores.data() + scores.size());
  const auto report = evaluate_scores(std::string(to_string(kind)), labels, sv, s.threshold);
  write_text(s.out_path, report.to_json() + "\n", *s.out);
  if (given(s.roc_path)) write_text(s.roc_path, roc_to_csv(roc_and_auc(labels, sv).curve), *s.out);
}

void cmd_bench(Settings& s) {
  const auto artifact = load_model(s.model_path);
  const auto kind = kind_of(artifact.model);
  const auto fm = load_features(s.features);
  const auto g = graph_if_needed(s, kind);
  const auto rows = rows_for(fm, s.rows);
  const auto report = bench_model(artifact.model, fm, g ? &*g : nullptr, rows, s.repetitions, s.warmup);
  write_text(s.out_path, report.to_json() + "\n", *s.out);
}

void cmd_predict(Settings& s) {
  const auto artifact = load_model(s.model_path);
  PipelineConfig pc;
  bool from_pipeline = true;
  try {
    pc = PipelineConfig::from_json(artifact.config_echo);
  } catch (const PreconditionError&) {
    from_pipeline = false;
  }
  if (!from_pipeline || !nlohmann::json::parse(artifact.config_echo).contains("pca")) {
    throw PreconditionError(s.model_path + " was not produced by the pipeline; predict needs a pipeline model");
  }
  pc.work_dir = s.work_dir == "model-dir" ? fs::path(s.model_path).parent_path() : fs::path(s.work_dir);
  auto options = PredictOptions::from_pipeline(pc);
  if (given(s.cache)) options.embeddings.cache = s.cache;
  options.threshold = s.threshold;
  const auto predictions = predict_headlines(artifact.model, s.texts, options);
  std::string text;
  for (const auto& p : predictions) {
    nlohmann::ordered_json j;
    j["text"] = p.text;
    j["model"] = std::string(to_string(kind_of(artifact.model)));
    j["probability"] = p.probability;
    j["clickbait"] = p.label == 1;
    j["baitness"] = p.scores.baitness;
    j["informativeness"] = p.scores.informativeness;
    text += j.dump() + "\n";
  }
  write_text("-", text, *s.out);
}

void cmd_pipeline(Settings& s, const CLI::App& cmd) {
  auto cfg = given(s.pipeline_config) ? PipelineConfig::load(s.pipeline_config) : PipelineConfig{};
  if (s.pipeline_dir != "config") cfg.work_dir = s.pipeline_dir;
  if (cmd.count("--seed")) cfg.seed = s.seed;
  if (s.synthetic_size > 0) cfg.corpus.synthetic_size = s.synthetic_size;
  if (s.print_config) {
    *s.out << cfg.to_json() << '\n';
    return;
  }
  const auto result = run_pipeline(cfg, stages_from(s.stages), s.err);
  if (!result.rows.empty()) *s.out << format_summary_table(result.rows);
}

void add_embedding_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option("--provider", s.provider, "Embedding provider")->check(CLI::IsMember({"surrogate", "remote"}));
  cmd->add_option("--surrogate-seed", s.surrogate_seed, "Seed of the offline trigram projection");
  cmd->add_option("--cache", s.cache, "Persistent embedding cache file, or 'none'");
  cmd->add_flag("--rebuild-cache", s.rebuild_cache, "Discard an unreadable cache instead of failing")->default_str("false");
  cmd->add_option("--base-url", s.remote.base_url, "Embedding service base URL");
  cmd->add_option("--remote-model", s.remote.model, "Remote embedding model");
  cmd->add_option("--api-key-env", s.remote.api_key_env, "Environment variable holding the API key");
  cmd->add_option("--batch-size", s.remote.batch_size, "Texts per request")->check(CLI::PositiveNumber);
  cmd->add_option("--concurrency", s.remote.max_concurrency, "Requests in flight")->check(CLI::PositiveNumber);
  cmd->add_option("--retries", s.remote.max_retries, "Retries per batch on 429, 5xx or connection failure");
  cmd->add_option("--backoff-ms", s.backoff_ms, "Initial retry backoff in milliseconds");
  cmd->add_option("--timeout-s", s.timeout_s, "Request timeout in seconds");
}

void add_lexicon_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option("--bait-phrases", s.bait_phrases, "Bait phrase list, or 'builtin'");
  cmd->add_option("--vague-words", s.vague_words, "Vague word list, or 'builtin'");
  cmd->add_option("--valence", s.valence, "word<TAB>valence file, or 'builtin'");
  cmd->add_option("--function-words", s.function_words, "Function word list, or 'builtin'");
}

}  // namespace

Cli::Cli() : s_(std::make_unique<Settings>()), app_(std::make_unique<CLI::App>("Hybrid clickbait detection toolkit", "clickbait")) {
  auto& s = *s_;
  auto& app = *app_;
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough(false);

  auto ingest_opts = [&s](CLI::App* cmd) {
    cmd->add_option("--schema", s.schema, "Input layout")->check(CLI::IsMember({"k1", "k2", "cc17"}));
    cmd->add_option("--in", s.in, "Source file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", s.out_path, "Output corpus (JSON lines)")->required();
  };

  auto* ingest = app.add_subcommand("ingest", "Parse a public dataset into the canonical corpus format");
  ingest_opts(ingest);
  ingest->callback([&s] { cmd_ingest(s); });

  auto* corpus = app.add_subcommand("corpus", "Corpus utilities");
  corpus->require_subcommand(1);
  auto* c_ingest = corpus->add_subcommand("ingest", "Same as the top-level ingest");
  ingest_opts(c_ingest);
  c_ingest->callback([&s] { cmd_ingest(s); });

  auto* c_synth = corpus->add_subcommand("synth", "Generate the seeded synthetic corpus");
  c_synth->add_option("--n", s.synth_n, "Number of headlines")->check(CLI::Range(2, 1000000));
  c_synth->add_option("--seed", s.seed, "Generator seed");
  c_synth->add_option("--out", s.out_path, "Output corpus")->required();
  c_synth->callback([&s] { cmd_synth(s); });

  auto* c_merge = corpus->add_subcommand("merge", "Merge corpora, dropping duplicates and label conflicts");
  c_merge->add_option("--in", s.inputs, "Input corpora")->required()->check(CLI::ExistingFile);
  c_merge->add_option("--out", s.out_path, "Output corpus")->required();
  c_merge->callback([&s] { cmd_merge(s); });

  auto* c_sample = corpus->add_subcommand("sample", "Draw a class-balanced sample");
  c_sample->add_option("--in", s.in, "Input corpus")->required()->check(CLI::ExistingFile);
  c_sample->add_option("--per-class", s.per_class, "Records per class");
  c_sample->add_option("--seed", s.seed, "Sampling seed");
  c_sample->add_option("--out", s.out_path, "Output corpus")->required();
  c_sample->callback([&s] { cmd_sample(s); });

  auto* c_split = corpus->add_subcommand("split", "Tag a stratified train/test split");
  c_split->add_option("--in", s.in, "Input corpus")->required()->check(CLI::ExistingFile);
  c_split->add_option("--train-frac", s.train_frac, "Training fraction per class")->check(CLI::Range(0.0, 1.0));
  c_split->add_option("--seed", s.seed, "Split seed");
  c_split->add_option("--out", s.out_path, "Output corpus with split tags")->required();
  c_split->callback([&s] { cmd_split(s); });

  auto* score = app.add_subcommand("score", "Baitness and informativeness of headlines");
  score->add_option("--text", s.texts, "Headline to score (repeatable)");
  score->add_option("--in", s.in, "Corpus to score")->default_str("none");
  score->add_option("--out", s.out_path, "Output JSON lines, '-' for stdout")->default_str("-");
  add_lexicon_flags(score, s);
  score->callback([&s] { cmd_score(s); });

  auto* embed = app.add_subcommand("embed", "Embed a corpus into a 3072-dimensional matrix");
  embed->add_option("--in", s.in, "Input corpus")->required()->check(CLI::ExistingFile);
  embed->add_option("--out", s.out_path, "Output matrix")->required();
  add_embedding_flags(embed, s);
  embed->callback([&s] { cmd_embed(s); });

  auto* pca = app.add_subcommand("pca", "Principal component projection");
  pca->require_subcommand(1);
  auto* p_fit = pca->add_subcommand("fit", "Fit on the training rows of an embedding matrix");
  p_fit->add_option("--in", s.in, "Embedding matrix")->required()->check(CLI::ExistingFile);
  p_fit->add_option("--dim", s.pca_dim, "Output dimension")->check(CLI::PositiveNumber);
  p_fit->add_flag("--all-rows", s.all_rows, "Fit on every row, not only the training split")->default_str("false");
  p_fit->add_option("--out", s.out_path, "Output model")->required();
  p_fit->callback([&s] { cmd_pca_fit(s); });
  auto* p_tr = pca->add_subcommand("transform", "Project a matrix with a fitted model");
  p_tr->add_option("--model", s.pca_model, "PCA model")->required()->check(CLI::ExistingFile);
  p_tr->add_option("--in", s.in, "Embedding matrix")->required()->check(CLI::ExistingFile);
  p_tr->add_option("--out", s.out_path, "Output reduced matrix")->required();
  p_tr->callback([&s] { cmd_pca_transform(s); });
  auto* p_mem = pca->add_subcommand("memory", "Storage needed for a float matrix");
  p_mem->add_option("--rows", s.mem_rows, "Row count");
  p_mem->add_option("--dim", s.mem_dim, "Columns per row");
  p_mem->add_option("--bytes", s.mem_bytes, "Bytes per value");
  p_mem->callback([&s] { cmd_pca_memory(s); });

  auto* features = app.add_subcommand("features", "Assemble hybrid feature vectors");
  features->add_option("--corpus", s.corpus, "Corpus aligned with the reduced matrix")->required()->check(CLI::ExistingFile);
  features->add_option("--reduced", s.reduced, "Reduced embedding matrix")->required()->check(CLI::ExistingFile);
  features->add_option("--mode", s.mode, "Heuristic columns: aggregate (2) or expanded (10)")
      ->check(CLI::IsMember({"aggregate", "expanded"}));
  features->add_flag("--standardize", s.standardize, "Z-score the embedding block with training statistics")->default_str("false");
  features->add_option("--out", s.out_path, "Output feature matrix")->required();
  add_lexicon_flags(features, s);
  features->callback([&s] { cmd_features(s); });

  auto* graph = app.add_subcommand("graph", "Build the cosine k-nearest-neighbor graph");
  graph->add_option("--features", s.features, "Feature matrix")->required()->check(CLI::ExistingFile);
  graph->add_option("--k", s.k, "Neighbors per node")->check(CLI::PositiveNumber);
  graph->add_option("--threads", s.threads, "Search threads, 0 for all cores");
  graph->add_option("--out", s.out_path, "Output graph (JSON lines)")->required();
  graph->callback([&s] { cmd_graph(s); });

  auto* train = app.add_subcommand("train", "Train one classifier");
  train->add_option("--model", s.model_kind, "Classifier")->check(CLI::IsMember({"gbdt", "gcn", "sage"}));
  train->add_option("--features", s.features, "Feature matrix")->required()->check(CLI::ExistingFile);
  train->add_option("--graph", s.graph, "Graph for gcn and sage, or 'none'");
  train->add_option("--config", s.train_config, "Training config JSON, or 'none'");
  train->add_option("--seed", s.train_seed, "Initialization seed");
  train->add_option("--epochs", s.epochs, "GNN epochs");
  train->add_option("--learning-rate", s.learning_rate, "GNN Adam learning rate");
  train->add_option("--hidden", s.hidden, "GNN hidden units");
  train->add_option("--rounds", s.rounds, "Boosting rounds");
  train->add_option("--max-depth", s.max_depth, "Tree depth");
  train->add_option("--gbdt-learning-rate", s.gbdt_lr, "Boosting shrinkage");
  train->add_option("--out", s.out_path, "Output model")->required();
  train->callback([&s, train] { cmd_train(s, *train); });

  auto* evaluate = app.add_subcommand("evaluate", "F1, ROC curve and AUC of a trained model");
  evaluate->add_option("--model", s.model_path, "Model file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--features", s.features, "Feature matrix")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--graph", s.graph, "Graph for gcn and sage, or 'none'");
  evaluate->add_option("--rows", s.rows, "Rows to score")->check(CLI::IsMember({"test", "train", "all"}));
  evaluate->add_option("--threshold", s.threshold, "Decision threshold for F1");
  evaluate->add_option("--out", s.out_path, "Report JSON, '-' for stdout")->default_str("-");
  evaluate->add_option("--roc", s.roc_path, "ROC curve CSV, or 'none'");
  evaluate->callback([&s] { cmd_evaluate(s); });

  auto* bench = app.add_subcommand("bench", "Per-sample inference latency of a trained model");
  bench->add_option("--model", s.model_path, "Model file")->required()->check(CLI::ExistingFile);
  bench->add_option("--features", s.features, "Feature matrix")->required()->check(CLI::ExistingFile);
  bench->add_option("--graph", s.graph, "Graph for gcn and sage, or 'none'");
  bench->add_option("--rows", s.rows, "Rows to time")->check(CLI::IsMember({"test", "train", "all"}));
  bench->add_option("--repetitions", s.repetitions, "Timed passes")->check(CLI::PositiveNumber);
  bench->add_option("--warmup", s.warmup, "Untimed passes first")->check(CLI::NonNegativeNumber);
  bench->add_option("--out", s.out_path, "Report JSON, '-' for stdout")->default_str("-");
  bench->callback([&s] { cmd_bench(s); });

  auto* predict = app.add_subcommand("predict", "Classify new headlines with a pipeline model");
  predict->add_option("--model", s.model_path, "Model file from a pipeline run")->required()->check(CLI::ExistingFile);
  predict->add_option("--text", s.texts, "Headline (repeatable)")->required();
  predict->add_option("--work-dir", s.work_dir, "Pipeline directory holding pca.model, features and graph");
  predict->add_option("--threshold", s.threshold, "Decision threshold");
  predict->add_option("--cache", s.cache, "Embedding cache file, or 'none'");
  predict->callback([&s] { cmd_predict(s); });

  auto* pipeline = app.add_subcommand("pipeline", "Run the end-to-end pipeline");
  pipeline->add_option("--config", s.pipeline_config, "Pipeline config JSON, or 'none' for defaults");
  pipeline->add_option("--work-dir", s.pipeline_dir, "Output directory, overriding the config");
  pipeline->add_option("--stages", s.stages,
                       "Comma-separated subset of ingest,embed,pca,features,graph,train,evaluate,bench");
  pipeline->add_option("--seed", s.seed, "Corpus seed, overriding the config");
  pipeline->add_option("--synthetic-size", s.synthetic_size, "Synthetic corpus size, 0 keeps the config value");
  pipeline->add_flag("--print-config", s.print_config, "Print the effective config and exit")->default_str("false");
  pipeline->callback([&s, pipeline] { cmd_pipeline(s, *pipeline); });
}

Cli::~Cli() = default;

int Cli::run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  s_->out = &out;
  s_->err = &err;
  try {
    app_->parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app_->exit(e, out, err);
  } catch (const DependencyError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace clickbait::cli
