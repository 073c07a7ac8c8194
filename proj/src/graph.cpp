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

#include "clickbait/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include "clickbait/error.hpp"
#include "json.hpp"

namespace clickbait {

KnnGraph::KnnGraph(std::size_t k, std::vector<std::vector<Neighbor>> adjacency)
    : k_(k), adjacency_(std::move(adjacency)) {
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    auto& list = adjacency_[u];
    std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].node >= adjacency_.size() || list[i].node == u ||
          (i > 0 && list[i].node == list[i - 1].node)) {
        throw PreconditionError("invalid adjacency list for node " + std::to_string(u));
      }
    }
  }
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    for (const auto& nb : adjacency_[u]) {
      const auto& back = adjacency_[nb.node];
      const auto it = std::lower_bound(back.begin(), back.end(), u,
                                       [](const Neighbor& a, std::size_t v) { return a.node < v; });
      if (it == back.end() || it->node != u) throw PreconditionError("graph is not symmetric");
    }
  }
}

std::size_t KnnGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : adjacency_) total += list.size();
  return total / 2;
}

namespace {

using RowMatrixD = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMatrixD normalized_rows(const RowMatrixF& X) {
  RowMatrixD out = X.cast<double>();
  std::vector<std::size_t> zero;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double norm = out.row(r).norm();
    if (norm == 0.0 || !std::isfinite(norm)) {
      zero.push_back(static_cast<std::size_t>(r));
      continue;
    }
    out.row(r) /= norm;
  }
  if (!zero.empty()) {
    std::string list;
    for (std::size_t i = 0; i < std::min<std::size_t>(zero.size(), 20); ++i) {
      list += (i ? "," : "") + std::to_string(zero[i]);
    }
    throw PreconditionError("kNN graph rejects zero-norm rows: [" + list + "]");
  }
  return out;
}

// Top-k by similarity descending, index ascending.
void select_top_k(const double* sims, std::size_t n, std::size_t self, std::size_t k,
                  std::vector<std::size_t>& scratch, std::vector<std::size_t>& out) {
  scratch.clear();
  for (std::size_t j = 0; j < n; ++j) {
    if (j != self) scratch.push_back(j);
  }
  const auto better = [sims](std::size_t a, std::size_t b) {
    return sims[a] > sims[b] || (sims[a] == sims[b] && a < b);
  };
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), scratch.end(), better);
  out.assign(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k));
}

}  // namespace

KnnGraph build_knn_graph(const RowMatrixF& X, std::size_t k, unsigned threads) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (k < 1 || k >= n) {
    throw PreconditionError("kNN graph needs 1 <= k < n (k=" + std::to_string(k) +
                            ", n=" + std::to_string(n) + ")");
  }
  const RowMatrixD Xn = normalized_rows(X);

  std::vector<std::vector<std::size_t>> chosen(n);
  constexpr std::size_t kBlock = 256;
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));

  auto work = [&](unsigned worker) {
    std::vector<std::size_t> scratch;
    for (std::size_t b = worker; b < n_blocks; b += threads) {
      const auto begin = b * kBlock;
      const auto rows = std::min(kBlock, n - begin);
      const RowMatrixD sims = Xn.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(rows)) *
                              Xn.transpose();
      for (std::size_t r = 0; r < rows; ++r) {
        select_top_k(sims.row(static_cast<Eigen::Index>(r)).data(), n, begin + r, k, scratch,
                     chosen[begin + r]);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();

  std::vector<std::set<std::size_t>> linked(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto v : chosen[u]) {
      linked[u].insert(v);
      linked[v].insert(u);
    }
  }
  std::vector<std::vector<Neighbor>> adjacency(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto v : linked[u]) {
      // Same expression for both directions so weights are exactly symmetric.
      const auto a = std::min(u, v);
      const auto b = std::max(u, v);
      const double w = std::clamp(Xn.row(static_cast<Eigen::Index>(a)).dot(Xn.row(static_cast<Eigen::Index>(b))), -1.0, 1.0);
      adjacency[u].push_back({v, w});
    }
  }
  return KnnGraph(k, std::move(adjacency));
}

KnnGraph build_knn_graph(const FeatureMatrix& features, std::size_t k, unsigned threads) {
  std::string ids;
  for (Eigen::Index r = 0; r < features.values.rows(); ++r) {
    const double norm = features.values.row(r).cast<double>().norm();
    if (norm == 0.0 || !std::isfinite(norm)) {
      ids += (ids.empty() ? "" : ",") + features.ids.at(static_cast<std::size_t>(r));
    }
  }
  if (!ids.empty()) throw PreconditionError("kNN graph rejects zero-norm rows, ids: [" + ids + "]");
  return build_knn_graph(features.values, k, threads);
}

std::vector<std::size_t> nearest_rows(const RowMatrixF& reference, std::span<const float> query,
                                      std::size_t k) {
  const auto n = static_cast<std::size_t>(reference.rows());
  if (k < 1 || k > n) throw PreconditionError("nearest_rows needs 1 <= k <= n");
  if (static_cast<Eigen::Index>(query.size()) != reference.cols()) {
    throw PreconditionError("nearest_rows: dimension mismatch");
  }
  const Eigen::RowVectorXd q =
      Eigen::Map<const Eigen::RowVectorXf>(query.data(), static_cast<Eigen::Index>(query.size())).cast<double>();
  const double qn = q.norm();
  if (qn == 0.0) throw PreconditionError("nearest_rows: zero-norm query");
  const RowMatrixD Xn = normalized_rows(reference);
  const Eigen::VectorXd sims = Xn * (q / qn).transpose();
  std::vector<std::size_t> scratch;
  std::vector<std::size_t> out;
  select_top_k(sims.data(), n, n, k, scratch, out);
  return out;
}

KnnGraph attach_nodes(const KnnGraph& g, const RowMatrixF& base, const RowMatrixF& extra) {
  const auto n = g.size();
  if (static_cast<std::size_t>(base.rows()) != n) throw PreconditionError("attach_nodes: base rows != graph size");
  std::vector<std::vector<Neighbor>> adjacency(n + static_cast<std::size_t>(extra.rows()));
  for (std::size_t u = 0; u < n; ++u) adjacency[u] = g.neighbors(u);
  const auto k = std::min(g.k(), n);
  const RowMatrixD Xn = normalized_rows(base);
  for (Eigen::Index r = 0; r < extra.rows(); ++r) {
    const auto node = n + static_cast<std::size_t>(r);
    const auto row = extra.row(r);
    const auto near = nearest_rows(base, std::span(row.data(), static_cast<std::size_t>(row.size())), k);
    const Eigen::RowVectorXd q = row.cast<double>() / row.cast<double>().norm();
    for (const auto v : near) {
      const double w = std::clamp(Xn.row(static_cast<Eigen::Index>(v)).dot(q), -1.0, 1.0);
      adjacency[node].push_back({v, w});
      adjacency[v].push_back({node, w});
    }
  }
  return KnnGraph(g.k(), std::move(adjacency));
}

SparseMatrixD normalize_adjacency(const KnnGraph& g) {
  const auto n = g.size();
  std::vector<double> inv_sqrt(n);
  for (std::size_t u = 0; u < n; ++u) inv_sqrt[u] = 1.0 / std::sqrt(static_cast<double>(g.degree(u) + 1));
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(n + 2 * g.edge_count());
  for (std::size_t u = 0; u < n; ++u) {
    const auto ui = static_cast<Eigen::Index>(u);
    entries.emplace_back(ui, ui, inv_sqrt[u] * inv_sqrt[u]);
    for (const auto& nb : g.neighbors(u)) {
      // Multiply in a fixed order so (u,v) and (v,u) are bitwise equal.
      const auto lo = std::min(u, nb.node);
      const auto hi = std::max(u, nb.node);
      entries.emplace_back(ui, static_cast<Eigen::Index>(nb.node), inv_sqrt[lo] * inv_sqrt[hi]);
    }
  }
  SparseMatrixD A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  A.setFromTriplets(entries.begin(), entries.end());
  return A;
}

SparseMatrixD mean_aggregation(const KnnGraph& g) {
  const auto n = g.size();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * g.edge_count());
  for (std::size_t u = 0; u < n; ++u) {
    const double w = g.degree(u) ? 1.0 / static_cast<double>(g.degree(u)) : 0.0;
    for (const auto& nb : g.neighbors(u)) {
      entries.emplace_back(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(nb.node), w);
    }
  }
  SparseMatrixD M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  M.setFromTriplets(entries.begin(), entries.end());
  return M;
}

void save_graph(const std::filesystem::path& path, const KnnGraph& g) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << nlohmann::ordered_json{{"n", g.size()}, {"k", g.k()}, {"metric", "cosine"}}.dump() << '\n';
  for (std::size_t u = 0; u < g.size(); ++u) {
    nlohmann::ordered_json line;
    line["node"] = u;
    line["neighbors"] = nlohmann::json::array();
    line["weights"] = nlohmann::json::array();
    for (const auto& nb : g.neighbors(u)) {
      line["neighbors"].push_back(nb.node);
      line["weights"].push_back(nb.weight);
    }
    out << line.dump() << '\n';
  }
}

KnnGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty graph file");
  try {
    const auto header = nlohmann::json::parse(line);
    const auto n = header.at("n").get<std::size_t>();
    const auto k = header.at("k").get<std::size_t>();
    if (header.value("metric", std::string("cosine")) != "cosine") {
      throw FormatError(path.string() + ": unsupported metric");
    }
    std::vector<std::vector<Neighbor>> adjacency(n);
    std::size_t seen = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      const auto node = j.at("node").get<std::size_t>();
      const auto& nbs = j.at("neighbors");
      const auto& ws = j.at("weights");
      if (node >= n || nbs.size() != ws.size()) throw FormatError(path.string() + ": bad node line");
      for (std::size_t i = 0; i < nbs.size(); ++i) {
        adjacency[node].push_back({nbs[i].get<std::size_t>(), ws[i].get<double>()});
      }
      ++seen;
    }
    if (seen != n) throw FormatError(path.string() + ": expected " + std::to_string(n) + " node lines");
    return KnnGraph(k, std::move(adjacency));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace clickbait
