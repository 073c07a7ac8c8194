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
#include <bit>
#include <cmath>
#include <fstream>
#include "json.hpp"

#include "clickbait/error.hpp"
#include "clickbait/models.hpp"

namespace clickbait {

using nlohmann::ordered_json;

double probability(double logit) {
  // 1 - sigmoid(36) still rounds below 1 in double precision.
  const double z = std::clamp(logit, -36.0, 36.0);
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw PreconditionError("train config: " + what); };
  if (epochs < 1) fail("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate must be positive");
  if (hidden_dim < 1) fail("hidden_dim must be >= 1");
  if (gbdt.rounds < 0) fail("gbdt.rounds must be >= 0");
  if (gbdt.max_depth < 1 || gbdt.max_depth > 16) fail("gbdt.max_depth must be in [1, 16]");
  if (!(gbdt.learning_rate > 0.0 && gbdt.learning_rate <= 1.0)) fail("gbdt.learning_rate must be in (0, 1]");
  if (!(gbdt.min_child_weight >= 0.0) || !std::isfinite(gbdt.min_child_weight)) {
    fail("gbdt.min_child_weight must be >= 0");
  }
  if (!(gbdt.lambda >= 0.0) || !std::isfinite(gbdt.lambda)) fail("gbdt.lambda must be >= 0");
}

std::string TrainConfig::to_json() const {
  ordered_json j;
  j["seed"] = seed;
  j["epochs"] = epochs;
  j["learning_rate"] = learning_rate;
  j["hidden_dim"] = hidden_dim;
  j["gbdt"] = {{"rounds", gbdt.rounds},
               {"max_depth", gbdt.max_depth},
               {"learning_rate", gbdt.learning_rate},
               {"min_child_weight", gbdt.min_child_weight},
               {"lambda", gbdt.lambda}};
  return j.dump();
}

TrainConfig TrainConfig::from_json(std::string_view text) {
  TrainConfig cfg;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw PreconditionError("train config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "epochs") {
        cfg.epochs = value.get<int>();
      } else if (key == "learning_rate") {
        cfg.learning_rate = value.get<double>();
      } else if (key == "hidden_dim") {
        cfg.hidden_dim = value.get<int>();
      } else if (key == "gbdt") {
        for (const auto& [gk, gv] : value.items()) {
          if (gk == "rounds") {
            cfg.gbdt.rounds = gv.get<int>();
          } else if (gk == "max_depth") {
            cfg.gbdt.max_depth = gv.get<int>();
          } else if (gk == "learning_rate") {
            cfg.gbdt.learning_rate = gv.get<double>();
          } else if (gk == "min_child_weight") {
            cfg.gbdt.min_child_weight = gv.get<double>();
          } else if (gk == "lambda") {
            cfg.gbdt.lambda = gv.get<double>();
          } else {
            throw PreconditionError("train config: unknown key gbdt." + gk);
          }
        }
      } else {
        throw PreconditionError("train config: unknown key " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("train config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGbdt: return "gbdt";
    case ModelKind::kGcn: return "gcn";
    case ModelKind::kSage: return "sage";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "gbdt" || name == "xgboost") return ModelKind::kGbdt;
  if (name == "gcn") return ModelKind::kGcn;
  if (name == "sage" || name == "graphsage") return ModelKind::kSage;
  throw PreconditionError("unknown model '" + std::string(name) + "' (expected gbdt, gcn or sage)");
}

ModelKind kind_of(const AnyModel& model) { return static_cast<ModelKind>(model.index()); }

namespace {

constexpr char kModelMagic[4] = {'C', 'B', 'M', 'D'};
constexpr std::uint32_t kModelVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out_.put(static_cast<char>((v >> (8 * k)) & 0xFF));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  template <typename Derived>
  void block(const Eigen::DenseBase<Derived>& m) {
    // Row-major order regardless of storage.
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) f32(m(r, c));
    }
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
      const int c = in_.get();
      if (c == EOF) throw FormatError(name_ + ": model file truncated");
      v |= static_cast<std::uint32_t>(c & 0xFF) << (8 * k);
    }
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f32() { return std::bit_cast<float>(u32()); }
  template <typename Derived>
  void block(Eigen::DenseBase<Derived>& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = f32();
    }
  }
  std::string bytes(std::size_t n) {
    std::string s(n, '\0');
    if (!in_.read(s.data(), static_cast<std::streamsize>(n))) throw FormatError(name_ + ": model file truncated");
    return s;
  }
  bool at_end() { return in_.peek() == EOF; }

 private:
  std::istream& in_;
  std::string name_;
};

struct Shape {
  std::uint32_t input_dim = 0;
  std::uint32_t hidden = 0;
};

Shape shape_of(const AnyModel& model) {
  return std::visit(
      [](const auto& m) -> Shape {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GbdtModel>) {
          return {static_cast<std::uint32_t>(m.n_features), 0};
        } else if constexpr (std::is_same_v<T, GcnModel>) {
          return {static_cast<std::uint32_t>(m.W1.rows()), static_cast<std::uint32_t>(m.W1.cols())};
        } else {
          return {static_cast<std::uint32_t>(m.Ws1.rows()), static_cast<std::uint32_t>(m.Ws1.cols())};
        }
      },
      model);
}

}  // namespace

void save_model(const std::filesystem::path& path, const AnyModel& model, const std::string& config_echo) {
  ordered_json header;
  header["config"] = config_echo.empty() ? ordered_json::object() : ordered_json::parse(config_echo);
  std::visit([&](const auto& m) { header["loss_history"] = m.loss_history; }, model);
  if (const auto* g = std::get_if<GbdtModel>(&model)) {
    header["base_score"] = g->base_score;
    header["learning_rate"] = g->learning_rate;
    std::vector<std::size_t> sizes;
    for (const auto& t : g->trees) sizes.push_back(t.nodes.size());
    header["tree_sizes"] = sizes;
  }
  const std::string echo = header.dump();
  const auto shape = shape_of(model);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  Writer w(out);
  out.write(kModelMagic, 4);
  w.u32(kModelVersion);
  w.u32(static_cast<std::uint32_t>(kind_of(model)));
  w.u32(shape.input_dim);
  w.u32(shape.hidden);
  w.u32(static_cast<std::uint32_t>(echo.size()));
  out.write(echo.data(), static_cast<std::streamsize>(echo.size()));

  if (const auto* g = std::get_if<GbdtModel>(&model)) {
    for (const auto& tree : g->trees) {
      for (const auto& node : tree.nodes) {
        w.i32(node.feature);
        w.f32(node.threshold);
        w.i32(node.left);
        w.i32(node.right);
        w.f32(node.leaf);
      }
    }
  } else if (const auto* m = std::get_if<GcnModel>(&model)) {
    w.block(m->W1);
    w.block(m->b1);
    w.block(m->W2);
    w.f32(m->b2);
  } else if (const auto* s = std::get_if<SageModel>(&model)) {
    w.block(s->Ws1);
    w.block(s->Wn1);
    w.block(s->b1);
    w.block(s->ws2);
    w.block(s->wn2);
    w.f32(s->b2);
  }
  if (!out) throw Error("write failed for " + path.string());
}

ModelArtifact load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  Reader r(in, path.string());
  if (r.bytes(4) != std::string_view(kModelMagic, 4)) throw FormatError(path.string() + ": not a model file");
  if (r.u32() != kModelVersion) throw FormatError(path.string() + ": unsupported model version");
  const auto kind = r.u32();
  if (kind > 2) throw FormatError(path.string() + ": unknown model kind " + std::to_string(kind));
  const Eigen::Index in_dim = r.u32();
  const Eigen::Index hidden = r.u32();
  const auto echo_len = r.u32();
  ordered_json header;
  try {
    header = ordered_json::parse(r.bytes(echo_len));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": corrupt model header: " + e.what());
  }

  ModelArtifact artifact;
  artifact.config_echo = header.value("config", ordered_json::object()).dump();
  const auto history = header.value("loss_history", std::vector<double>{});
  switch (static_cast<ModelKind>(kind)) {
    case ModelKind::kGbdt: {
      GbdtModel g;
      g.n_features = static_cast<std::size_t>(in_dim);
      g.base_score = header.value("base_score", 0.0);
      g.learning_rate = header.value("learning_rate", 0.1);
      for (const auto size : header.value("tree_sizes", std::vector<std::size_t>{})) {
        RegressionTree tree;
        tree.nodes.resize(size);
        for (auto& node : tree.nodes) {
          node.feature = r.i32();
          node.threshold = static_cast<float>(r.f32());
          node.left = r.i32();
          node.right = r.i32();
          node.leaf = static_cast<float>(r.f32());
          const bool bad_split = node.feature >= 0 &&
                                 (node.feature >= in_dim || node.left <= 0 || node.right <= 0 ||
                                  static_cast<std::size_t>(std::max(node.left, node.right)) >= size);
          if (bad_split) throw FormatError(path.string() + ": corrupt tree node");
        }
        g.trees.push_back(std::move(tree));
      }
      g.loss_history = history;
      artifact.model = std::move(g);
      break;
    }
    case ModelKind::kGcn: {
      auto m = GcnModel::zeros(in_dim, hidden);
      r.block(m.W1);
      r.block(m.b1);
      r.block(m.W2);
      m.b2 = r.f32();
      m.loss_history = history;
      artifact.model = std::move(m);
      break;
    }
    case ModelKind::kSage: {
      auto m = SageModel::zeros(in_dim, hidden);
      r.block(m.Ws1);
      r.block(m.Wn1);
      r.block(m.b1);
      r.block(m.ws2);
      r.block(m.wn2);
      m.b2 = r.f32();
      m.loss_history = history;
      artifact.model = std::move(m);
      break;
    }
  }
  if (!r.at_end()) throw FormatError(path.string() + ": trailing bytes after model weights");
  return artifact;
}

}  // namespace clickbait
